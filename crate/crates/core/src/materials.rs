//! Refractive index of Al(x)Ga(1-x)As below the band gap, and the Gaussian
//! fundamental mode of a single-mode fiber.
//!
//! The alloy index uses Afromowitz's modified single-effective-oscillator
//! model (Solid State Commun. 15, 59 (1974)):
//!
//! ```text
//! n² - 1 = Ed/E0 + Ed E²/E0³ + (η E⁴/π) ln[(2E0² - EΓ² - E²)/(EΓ² - E²)]
//! η = π Ed / (2 E0³ (E0² - EΓ²))
//! E0 = 3.65 + 0.871x + 0.179x²,  Ed = 36.1 - 2.45x,  EΓ = 1.424 + 1.266x + 0.26x²
//! ```
//!
//! It is a room-temperature closed form, analytic in photon energy below the
//! direct gap, which keeps numerical group-velocity derivatives clean.

use crate::consts::HC_EV_UM;
use crate::error::{Error, Result};
use crate::profile::{Grid1d, Profile1d, SeparableProfile};

/// Wavelength window (um) over which indices are served.
pub const SUPPORTED_WINDOW_UM: (f64, f64) = (0.75, 1.8);

/// Minimum distance (eV) kept between the photon energy and the direct gap.
pub const GAP_MARGIN_EV: f64 = 0.02;

const REFERENCE_TEMPERATURE_K: f64 = 295.0;
const TEMPERATURE_TOLERANCE_K: f64 = 10.0;

/// AlGaAs dispersion model evaluated at a fixed lattice temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialModel {
    temperature_k: f64,
}

impl Default for MaterialModel {
    fn default() -> Self {
        Self {
            temperature_k: REFERENCE_TEMPERATURE_K,
        }
    }
}

impl MaterialModel {
    /// The oscillator parameters are a room-temperature fit, so only
    /// temperatures within 10 K of 295 K are accepted.
    pub fn new(temperature_k: f64) -> Result<Self> {
        if !((temperature_k - REFERENCE_TEMPERATURE_K).abs() <= TEMPERATURE_TOLERANCE_K) {
            return Err(Error::domain(
                "temperature_k",
                temperature_k,
                format!(
                    "model is parametrized at {REFERENCE_TEMPERATURE_K} K (+/- {TEMPERATURE_TOLERANCE_K} K)"
                ),
            ));
        }
        Ok(Self { temperature_k })
    }

    pub fn temperature_k(&self) -> f64 {
        self.temperature_k
    }

    /// Direct (Γ) band gap in eV.
    pub fn direct_gap_ev(al_fraction: f64) -> f64 {
        1.424 + 1.266 * al_fraction + 0.26 * al_fraction * al_fraction
    }

    /// Refractive index of Al(x)Ga(1-x)As at vacuum wavelength `wavelength_um`.
    ///
    /// Fails with a domain error if `x` is outside `[0, 1]`, if the
    /// wavelength is outside [`SUPPORTED_WINDOW_UM`], or if the photon energy
    /// is within [`GAP_MARGIN_EV`] of the direct gap (absorbing region).
    pub fn refractive_index(&self, al_fraction: f64, wavelength_um: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&al_fraction) {
            return Err(Error::domain(
                "al_fraction",
                al_fraction,
                "aluminium fraction must lie in [0, 1]",
            ));
        }
        let (lo, hi) = SUPPORTED_WINDOW_UM;
        if !(lo..=hi).contains(&wavelength_um) {
            return Err(Error::domain(
                "wavelength_um",
                wavelength_um,
                format!("supported window is {lo}-{hi} um"),
            ));
        }
        let x = al_fraction;
        let e = HC_EV_UM / wavelength_um;
        let e_gap = Self::direct_gap_ev(x);
        if e > e_gap - GAP_MARGIN_EV {
            return Err(Error::domain(
                "wavelength_um",
                wavelength_um,
                format!(
                    "photon energy {e:.4} eV is at or above the x = {x} direct gap {e_gap:.4} eV"
                ),
            ));
        }
        let e0 = 3.65 + 0.871 * x + 0.179 * x * x;
        let ed = 36.1 - 2.45 * x;
        let (e2, e0_2, eg2) = (e * e, e0 * e0, e_gap * e_gap);
        let eta = std::f64::consts::PI * ed / (2.0 * e0.powi(3) * (e0_2 - eg2));
        let log_term = ((2.0 * e0_2 - eg2 - e2) / (eg2 - e2)).ln();
        let n2 =
            1.0 + ed / e0 + ed * e2 / e0.powi(3) + eta * e2 * e2 / std::f64::consts::PI * log_term;
        Ok(n2.sqrt())
    }
}

/// Gaussian approximation of the fundamental mode of a single-mode fiber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberMode {
    mode_field_diameter_um: f64,
    center_wavelength_um: f64,
}

impl Default for FiberMode {
    /// Standard telecom single-mode fiber: 10.4 um MFD at 1550 nm.
    fn default() -> Self {
        Self {
            mode_field_diameter_um: 10.4,
            center_wavelength_um: 1.55,
        }
    }
}

impl FiberMode {
    pub fn new(mode_field_diameter_um: f64, center_wavelength_um: f64) -> Result<Self> {
        if !(mode_field_diameter_um > 0.0) || !mode_field_diameter_um.is_finite() {
            return Err(Error::domain(
                "mode_field_diameter_um",
                mode_field_diameter_um,
                "mode-field diameter must be positive",
            ));
        }
        if !(center_wavelength_um > 0.0) {
            return Err(Error::domain(
                "center_wavelength_um",
                center_wavelength_um,
                "wavelength must be positive",
            ));
        }
        Ok(Self {
            mode_field_diameter_um,
            center_wavelength_um,
        })
    }

    pub fn mode_field_diameter_um(&self) -> f64 {
        self.mode_field_diameter_um
    }

    pub fn center_wavelength_um(&self) -> f64 {
        self.center_wavelength_um
    }

    /// 1/e² intensity radius (= field 1/e radius), um.
    pub fn waist_um(&self) -> f64 {
        0.5 * self.mode_field_diameter_um
    }

    /// `U0(x, y) ∝ exp(-(x² + y²)/w²)`, normalized on the given grids.
    pub fn fundamental_profile(
        &self,
        lateral: Grid1d,
        vertical: Grid1d,
    ) -> Result<SeparableProfile> {
        let w = self.waist_um();
        let gauss = move |u: f64| (-(u * u) / (w * w)).exp();
        SeparableProfile::new(
            Profile1d::from_fn(lateral, gauss),
            Profile1d::from_fn(vertical, gauss),
        )
        .normalized()
    }
}

/// Power coupling between two normalized 2-D Gaussians of waists `w1`, `w2`.
pub fn gaussian_mode_match(w1: f64, w2: f64) -> f64 {
    let r = 2.0 * w1 * w2 / (w1 * w1 + w2 * w2);
    r * r
}
