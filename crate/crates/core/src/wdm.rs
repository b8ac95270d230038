//! Frequency-channel grid and per-channel polarization-entanglement
//! figures.
//!
//! Channel `n` pairs the upper band `ω0 + nΔ ± Δω/2` with its conjugate
//! lower band. Within it the two-photon polarization state is
//! `α |TE TM> + β |TM TE>` populations with coherence `γ`, where
//!
//! ```text
//! α ∝ ∫_Bn |Φ(Ω)|² dΩ,   β ∝ ∫_Bn |Φ(-Ω)|² dΩ,   γ ∝ ∫_Bn Φ(Ω) Φ*(-Ω) dΩ
//! ```
//!
//! normalized so that `α + β = 1`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::consts::{omega_from_ghz, um_from_omega};
use crate::error::{Error, Result};
use crate::spdc::Jsa;

/// Uniform grid of conjugate channel pairs around `ω0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelGrid {
    pub omega0: f64,
    pub spacing_ghz: f64,
    pub bandwidth_ghz: f64,
    pub n_max: usize,
}

impl ChannelGrid {
    pub fn new(omega0: f64, spacing_ghz: f64, bandwidth_ghz: f64, n_max: usize) -> Result<Self> {
        if !(spacing_ghz > 0.0) || !spacing_ghz.is_finite() {
            return Err(Error::domain(
                "spacing_ghz",
                spacing_ghz,
                "must be positive",
            ));
        }
        if !(bandwidth_ghz > 0.0) || !bandwidth_ghz.is_finite() {
            return Err(Error::domain(
                "bandwidth_ghz",
                bandwidth_ghz,
                "must be positive",
            ));
        }
        if !(omega0 > 0.0) {
            return Err(Error::domain("omega0", omega0, "must be positive"));
        }
        Ok(Self {
            omega0,
            spacing_ghz,
            bandwidth_ghz,
            n_max,
        })
    }

    /// Detuning of the upper-path centre of channel `n`, rad/s.
    pub fn center_detuning(&self, n: usize) -> f64 {
        n as f64 * omega_from_ghz(self.spacing_ghz)
    }

    /// Detuning band `[lo, hi]` of channel `n` in the upper path, rad/s.
    pub fn band(&self, n: usize) -> (f64, f64) {
        let c = self.center_detuning(n);
        let half = 0.5 * omega_from_ghz(self.bandwidth_ghz);
        (c - half, c + half)
    }

    pub fn upper_wavelength_nm(&self, n: usize) -> f64 {
        um_from_omega(self.omega0 + self.center_detuning(n)) * 1e3
    }

    pub fn lower_wavelength_nm(&self, n: usize) -> f64 {
        um_from_omega(self.omega0 - self.center_detuning(n)) * 1e3
    }

    /// Bands of one path are disjoint when the width does not exceed the spacing.
    pub fn bands_disjoint(&self) -> bool {
        self.bandwidth_ghz <= self.spacing_ghz
    }
}

/// Normalized polarization coefficients of one channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelCoefficients {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: Complex64,
    /// `∫_Bn |Φ(Ω)|² + |Φ(-Ω)|² dΩ` before normalization, rad/s.
    pub band_intensity: f64,
}

impl ChannelCoefficients {
    pub fn concurrence(&self) -> f64 {
        concurrence(self.gamma)
    }
}

/// `C = 2 |γ|`.
pub fn concurrence(gamma: Complex64) -> f64 {
    2.0 * gamma.norm()
}

trait Sample: Copy + std::ops::Add<Output = Self> + std::ops::Mul<f64, Output = Self> {
    const ZERO: Self;
}

impl Sample for f64 {
    const ZERO: f64 = 0.0;
}

impl Sample for Complex64 {
    const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
}

/// `∫_a^b` of the piecewise-linear interpolant of `values` on a uniform
/// grid. Every result is a non-negative combination of the samples, so
/// Cauchy-Schwarz carries over from the samples to the integrals.
fn band_integral<T: Sample>(x0: f64, h: f64, values: &[T], a: f64, b: f64) -> T {
    let n = values.len();
    let first = (((a - x0) / h).floor().max(0.0) as usize).min(n - 2);
    let mut acc = T::ZERO;
    let mut k = first;
    while k + 1 < n {
        let (xl, xr) = (x0 + h * k as f64, x0 + h * (k + 1) as f64);
        if xl >= b {
            break;
        }
        let lo = a.max(xl);
        let hi = b.min(xr);
        if hi > lo {
            let at = |x: f64| {
                let t = (x - xl) / h;
                values[k] * (1.0 - t) + values[k + 1] * t
            };
            acc = acc + (at(lo) + at(hi)) * (0.5 * (hi - lo));
        }
        k += 1;
    }
    acc
}

/// `(α_n, β_n, γ_n)` for channel `n` of `grid`.
///
/// The upper band must lie inside the sampled detuning range; the lower
/// band is its mirror image and so lies inside too.
pub fn channel_coefficients(
    jsa: &Jsa,
    grid: &ChannelGrid,
    n: usize,
) -> Result<ChannelCoefficients> {
    let d = jsa.detuning();
    let (a, b) = grid.band(n);
    let d_max = d[d.len() - 1];
    if n == 0 || b > d_max * (1.0 + 1e-12) || a < -d_max {
        return Err(Error::ChannelOutOfRange { channel: n });
    }
    let phi = jsa.phi();
    let m = phi.len();
    let upper: Vec<f64> = phi.iter().map(|p| p.norm_sqr()).collect();
    let lower: Vec<f64> = (0..m).map(|i| phi[m - 1 - i].norm_sqr()).collect();
    let cross: Vec<Complex64> = (0..m).map(|i| phi[i] * phi[m - 1 - i].conj()).collect();
    let (x0, h) = (d[0], jsa.step());
    let u = band_integral(x0, h, &upper, a, b);
    let l = band_integral(x0, h, &lower, a, b);
    let x = band_integral(x0, h, &cross, a, b);
    let total = u + l;
    if !(total > 0.0) {
        return Err(Error::Contract(format!("channel {n} carries no intensity")));
    }
    Ok(ChannelCoefficients {
        alpha: u / total,
        beta: l / total,
        gamma: x / total,
        band_intensity: total,
    })
}

/// One row of the channel report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelRow {
    pub n: usize,
    pub lambda_upper_nm: f64,
    pub lambda_lower_nm: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: Complex64,
    pub concurrence: f64,
    /// Fiber-coupled pairs/s/mW in this channel pair.
    pub pair_rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelReport {
    pub rows: Vec<ChannelRow>,
}

/// Channel counts above a concurrence threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelCounts {
    /// Channels `1..=k` all above threshold.
    pub contiguous: usize,
    pub total: usize,
}

/// Report for channels `1..=n_max`.
///
/// `pair_rate_scale` converts band intensity (rad/s) to pairs/s/mW,
/// i.e. `σ² L² F_p Γ_s Γ_i`.
pub fn channel_report(
    jsa: &Jsa,
    grid: &ChannelGrid,
    pair_rate_scale: f64,
) -> Result<ChannelReport> {
    let rows = (1..=grid.n_max)
        .into_par_iter()
        .map(|n| {
            let c = channel_coefficients(jsa, grid, n)?;
            Ok(ChannelRow {
                n,
                lambda_upper_nm: grid.upper_wavelength_nm(n),
                lambda_lower_nm: grid.lower_wavelength_nm(n),
                alpha: c.alpha,
                beta: c.beta,
                gamma: c.gamma,
                concurrence: c.concurrence(),
                pair_rate: pair_rate_scale * c.band_intensity,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChannelReport { rows })
}

impl ChannelReport {
    /// Channels with `C_n > c_min`.
    pub fn channels_above(&self, c_min: f64) -> ChannelCounts {
        let total = self.rows.iter().filter(|r| r.concurrence > c_min).count();
        let contiguous = self
            .rows
            .iter()
            .take_while(|r| r.concurrence > c_min)
            .count();
        ChannelCounts { contiguous, total }
    }

    /// CSV rows in the documented column order.
    pub fn csv_rows(&self) -> Vec<(usize, [f64; 8])> {
        self.rows
            .iter()
            .map(|r| {
                (
                    r.n,
                    [
                        r.lambda_upper_nm,
                        r.lambda_lower_nm,
                        r.alpha,
                        r.beta,
                        r.gamma.re,
                        r.gamma.im,
                        r.concurrence,
                        r.pair_rate,
                    ],
                )
            })
            .collect()
    }
}

pub type Matrix4 = [[Complex64; 4]; 4];

/// Two-photon density matrix in the basis {TE·TE, TE·TM, TM·TE, TM·TM}
/// (upper path first).
pub fn density_matrix(alpha: f64, beta: f64, gamma: Complex64) -> Result<Matrix4> {
    if (alpha + beta - 1.0).abs() > 1e-9 || alpha < -1e-12 || beta < -1e-12 {
        return Err(Error::Contract(format!(
            "populations must be non-negative and sum to 1 (alpha {alpha}, beta {beta})"
        )));
    }
    if gamma.norm_sqr() > alpha * beta * (1.0 + 1e-9) + 1e-15 {
        return Err(Error::Contract(format!(
            "|gamma| = {} exceeds sqrt(alpha beta) = {}",
            gamma.norm(),
            (alpha * beta).sqrt()
        )));
    }
    let z = Complex64::new(0.0, 0.0);
    let mut rho = [[z; 4]; 4];
    rho[1][1] = Complex64::new(alpha, 0.0);
    rho[2][2] = Complex64::new(beta, 0.0);
    rho[1][2] = gamma;
    rho[2][1] = gamma.conj();
    Ok(rho)
}

/// Eigenvalues of [`density_matrix`] in descending order.
pub fn density_eigenvalues(alpha: f64, beta: f64, gamma: Complex64) -> [f64; 4] {
    let mean = 0.5 * (alpha + beta);
    let r = (0.25 * (alpha - beta).powi(2) + gamma.norm_sqr()).sqrt();
    let mut ev = [mean + r, mean - r, 0.0, 0.0];
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}
