//! Lateral symmetric-slab step of the effective-index method.
//!
//! The ridge of width `W` has index `n1` (the vertical n_eff) and is
//! flanked by `n2 = n1 - δn`. With `u = κ W/2` and
//! `V = (k0 W/2) sqrt(n1² - n2²)` the fundamental even mode satisfies
//! `u tan u = g sqrt(V² - u²)`, `g = 1` (lateral TE) or `(n1/n2)²`
//! (lateral TM), with `u` in `(0, min(V, π/2))`.

use super::Polarization;
use crate::error::Result;
use crate::profile::{Grid1d, Profile1d};
use crate::roots::bisect;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LateralSolution {
    /// 2-D effective index.
    pub n_eff: f64,
    /// Vertical effective index the reduction started from.
    pub n_vertical: f64,
    pub width_um: f64,
    /// Transverse wavenumber inside the ridge, 1/um.
    pub kappa: f64,
    /// Decay constant outside the ridge, 1/um.
    pub gamma: f64,
    /// Set when no lateral guiding exists and the vertical index is used.
    pub fallback: bool,
}

impl LateralSolution {
    /// Normalized fundamental lateral field on `grid`.
    ///
    /// A fallback solution (no lateral confinement) is returned as a flat
    /// top across the ridge.
    pub fn profile(&self, grid: Grid1d) -> Result<Profile1d> {
        let half = self.width_um / 2.0;
        let (kappa, gamma) = (self.kappa, self.gamma);
        let p = Profile1d::from_fn(grid, |x| {
            let a = x.abs();
            if self.fallback {
                if a <= half {
                    1.0
                } else {
                    0.0
                }
            } else if a <= half {
                (kappa * x).cos()
            } else {
                (kappa * half).cos() * (-gamma * (a - half)).exp()
            }
        });
        p.normalized()
    }
}

/// Fundamental lateral mode of the ridge.
///
/// `lateral_pol` is the polarization seen by the lateral walls, i.e. the
/// swap of the vertical polarization. A non-positive contrast or width
/// gives no lateral guiding; the vertical index is then returned with
/// `fallback` set.
pub fn effective_index_lateral(
    n_vertical: f64,
    delta_n: f64,
    width_um: f64,
    wavelength_um: f64,
    lateral_pol: Polarization,
) -> LateralSolution {
    let fallback = LateralSolution {
        n_eff: n_vertical,
        n_vertical,
        width_um: width_um.max(0.0),
        kappa: 0.0,
        gamma: 0.0,
        fallback: true,
    };
    let n1 = n_vertical;
    let n2 = n_vertical - delta_n;
    if !(delta_n > 0.0) || !(width_um > 0.0) || !(n2 > 0.0) {
        log::warn!(
            "lateral effective-index step has no guided solution (δn = {delta_n}, W = {width_um} um); using vertical index"
        );
        return fallback;
    }
    let k0 = 2.0 * std::f64::consts::PI / wavelength_um;
    let g = match lateral_pol {
        Polarization::Te => 1.0,
        Polarization::Tm => (n1 / n2).powi(2),
    };
    let v = 0.5 * k0 * width_um * (n1 * n1 - n2 * n2).sqrt();
    let u_max = v.min(std::f64::consts::FRAC_PI_2);
    let f = |u: f64| u * u.sin() - g * (v * v - u * u).max(0.0).sqrt() * u.cos();
    let u = bisect(0.0, u_max, 1e-15 * u_max.max(1e-300), f);
    let kappa = 2.0 * u / width_um;
    let n_eff = (n1 * n1 - (kappa / k0).powi(2)).sqrt();
    let gamma = 2.0 * (v * v - u * u).max(0.0).sqrt() / width_um;
    LateralSolution {
        n_eff,
        n_vertical,
        width_um,
        kappa,
        gamma,
        fallback: false,
    }
}
