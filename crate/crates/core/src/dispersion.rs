//! Propagation-constant tables `β(ω)` and the phase functions of the
//! down-conversion process.

use rayon::prelude::*;

use crate::consts::{omega_from_ghz, omega_from_um, um_from_omega, C};
use crate::error::{Error, Result};
use crate::modesolver::{ModeClass, ModeSolver, Polarization};
use crate::roots::bisect;
use crate::spline::CubicSpline;

/// Minimum number of samples in a broadband table.
pub const MIN_TABLE_SAMPLES: usize = 50;
/// Finite-difference step for group velocities on the interpolant.
pub const GROUP_VELOCITY_STEP_GHZ: f64 = 10.0;

/// Polarization and confinement class of one of the three fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeSpec {
    pub polarization: Polarization,
    pub class: ModeClass,
}

impl ModeSpec {
    pub const PUMP: ModeSpec = ModeSpec {
        polarization: Polarization::Tm,
        class: ModeClass::Bragg,
    };
    pub const SIGNAL: ModeSpec = ModeSpec {
        polarization: Polarization::Te,
        class: ModeClass::Tir,
    };
    pub const IDLER: ModeSpec = ModeSpec {
        polarization: Polarization::Tm,
        class: ModeClass::Tir,
    };

    pub fn label(&self) -> String {
        format!("{} {}", self.polarization, self.class.name())
    }
}

/// Sampled `β(ω)` with a not-a-knot cubic interpolant.
#[derive(Debug, Clone)]
pub struct DispersionTable {
    spec: ModeSpec,
    spline: CubicSpline,
}

impl DispersionTable {
    /// Table from explicit samples (`omega` in rad/s, `beta` in rad/m).
    pub fn from_samples(spec: ModeSpec, omega: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        Ok(Self {
            spec,
            spline: CubicSpline::not_a_knot(omega, beta)?,
        })
    }

    /// Samples `n_eff(λ)` at each angular frequency in parallel.
    pub fn from_index_fn(
        spec: ModeSpec,
        omega: Vec<f64>,
        n_eff: impl Fn(f64) -> Result<f64> + Sync,
    ) -> Result<Self> {
        let beta = omega
            .par_iter()
            .map(|&w| Ok(n_eff(um_from_omega(w))? * w / C))
            .collect::<Result<Vec<f64>>>()?;
        Self::from_samples(spec, omega, beta)
    }

    pub fn spec(&self) -> ModeSpec {
        self.spec
    }

    pub fn omega(&self) -> &[f64] {
        self.spline.knots()
    }

    pub fn beta_samples(&self) -> &[f64] {
        self.spline.values()
    }

    pub fn omega_range(&self) -> (f64, f64) {
        self.spline.domain()
    }

    pub fn contains(&self, omega: f64) -> bool {
        let (lo, hi) = self.omega_range();
        omega >= lo && omega <= hi
    }

    fn check(&self, omega: f64) -> Result<()> {
        if self.contains(omega) {
            Ok(())
        } else {
            let (lo, hi) = self.omega_range();
            Err(Error::Domain {
                parameter: "omega",
                value: omega,
                reason: format!(
                    "{} table covers {:.4}-{:.4} um",
                    self.spec.label(),
                    um_from_omega(hi),
                    um_from_omega(lo)
                ),
            })
        }
    }

    /// Interpolated propagation constant, rad/m.
    pub fn beta(&self, omega: f64) -> f64 {
        self.spline.eval(omega)
    }

    pub fn beta_checked(&self, omega: f64) -> Result<f64> {
        self.check(omega)?;
        Ok(self.beta(omega))
    }

    /// Interpolated effective index.
    pub fn n_eff(&self, omega: f64) -> f64 {
        self.beta(omega) * C / omega
    }

    /// `∂β/∂ω` in ns/m by a central difference of 2π·10 GHz on the interpolant.
    pub fn inverse_group_velocity(&self, omega: f64) -> Result<f64> {
        let h = omega_from_ghz(GROUP_VELOCITY_STEP_GHZ);
        self.check(omega - h)?;
        self.check(omega + h)?;
        Ok((self.beta(omega + h) - self.beta(omega - h)) / (2.0 * h) * 1e9)
    }

    /// CSV rows: lambda_nm, n_eff, beta_rad_per_m, inv_vg_ns_per_m.
    pub fn rows(&self) -> Vec<[f64; 4]> {
        self.omega()
            .iter()
            .zip(self.beta_samples())
            .map(|(&w, &b)| {
                let ivg = self
                    .inverse_group_velocity(w)
                    .unwrap_or_else(|_| self.spline.derivative(w) * 1e9);
                [um_from_omega(w) * 1e3, b * C / w, b, ivg]
            })
            .collect()
    }
}

/// Uniform angular-frequency grid spanning the wavelength band.
pub fn omega_grid(lambda_min_um: f64, lambda_max_um: f64, count: usize) -> Vec<f64> {
    let (lo, hi) = (omega_from_um(lambda_max_um), omega_from_um(lambda_min_um));
    let step = (hi - lo) / (count - 1) as f64;
    (0..count).map(|i| lo + step * i as f64).collect()
}

/// Broadband table of the 2-D effective index of a mode.
///
/// Every sample is an independent mode solve; a missing mode aborts the
/// build with the error naming the failing wavelength.
pub fn build_table(
    solver: &ModeSolver,
    spec: ModeSpec,
    lambda_range_um: (f64, f64),
    count: usize,
) -> Result<DispersionTable> {
    if count < MIN_TABLE_SAMPLES {
        return Err(Error::domain(
            "table_samples",
            count as f64,
            format!("need at least {MIN_TABLE_SAMPLES} samples"),
        ));
    }
    let (lo, hi) = lambda_range_um;
    if !(hi > lo) {
        return Err(Error::domain("lambda_max_um", hi, "band must be non-empty"));
    }
    DispersionTable::from_index_fn(spec, omega_grid(lo, hi, count), |lam| {
        solver.effective_index_2d(lam, spec.polarization, spec.class)
    })
}

/// Narrow table of `count` samples centred on `omega_center` (GA inner loop).
pub fn local_table(
    solver: &ModeSolver,
    spec: ModeSpec,
    omega_center: f64,
    half_span: f64,
    count: usize,
) -> Result<DispersionTable> {
    let step = 2.0 * half_span / (count - 1) as f64;
    let omega = (0..count)
        .map(|i| omega_center - half_span + step * i as f64)
        .collect();
    DispersionTable::from_index_fn(spec, omega, |lam| {
        solver.effective_index_2d(lam, spec.polarization, spec.class)
    })
}

/// CW pump propagation constant, rad/m.
pub fn pump_beta(solver: &ModeSolver, spec: ModeSpec, pump_um: f64) -> Result<f64> {
    let n = solver.effective_index_2d(pump_um, spec.polarization, spec.class)?;
    Ok(n * omega_from_um(pump_um) / C)
}

/// Degenerate mismatch `β_p(λp) - β_s(2λp) - β_i(2λp)` from direct solves.
pub fn degenerate_mismatch(solver: &ModeSolver, pump_um: f64) -> Result<f64> {
    let daughter = 2.0 * pump_um;
    let w = omega_from_um(daughter);
    let n_s = solver.effective_index_2d(daughter, Polarization::Te, ModeClass::Tir)?;
    let n_i = solver.effective_index_2d(daughter, Polarization::Tm, ModeClass::Tir)?;
    Ok(pump_beta(solver, ModeSpec::PUMP, pump_um)? - (n_s + n_i) * w / C)
}

/// Pump wavelength (um) of exact degenerate phase matching within
/// `center_um ± window_um`, the crossing nearest the centre.
pub fn find_phase_matched_pump(solver: &ModeSolver, center_um: f64, window_um: f64) -> Result<f64> {
    const SCAN: usize = 41;
    let not_found = || Error::NoPhaseMatch {
        center_nm: center_um * 1e3,
        window_nm: window_um * 1e3,
    };
    if !(window_um > 0.0) {
        return Err(not_found());
    }
    let points: Vec<f64> = (0..SCAN)
        .map(|i| center_um - window_um + 2.0 * window_um * i as f64 / (SCAN - 1) as f64)
        .collect();
    let values: Vec<Option<f64>> = points
        .par_iter()
        .map(|&lp| degenerate_mismatch(solver, lp).ok())
        .collect();
    let mut best: Option<(f64, f64, f64)> = None;
    for i in 0..SCAN - 1 {
        if let (Some(a), Some(b)) = (values[i], values[i + 1]) {
            if a == 0.0 {
                return Ok(points[i]);
            }
            if (a < 0.0) != (b < 0.0) {
                let mid = 0.5 * (points[i] + points[i + 1]);
                if best.is_none_or(|(_, _, m)| (mid - center_um).abs() < (m - center_um).abs()) {
                    best = Some((points[i], points[i + 1], mid));
                }
            }
        }
    }
    let (lo, hi, _) = best.ok_or_else(not_found)?;
    let f = |lp: f64| degenerate_mismatch(solver, lp).unwrap_or(f64::NAN);
    Ok(bisect(lo, hi, 1e-10, f))
}

/// Phase functions of the CW-pumped process around `ω0 = ω_p / 2`.
#[derive(Debug, Clone)]
pub struct PhaseMismatch {
    omega_p: f64,
    beta_p: f64,
    signal: DispersionTable,
    idler: DispersionTable,
}

impl PhaseMismatch {
    pub fn new(
        omega_p: f64,
        beta_p: f64,
        signal: DispersionTable,
        idler: DispersionTable,
    ) -> Result<Self> {
        let pm = Self {
            omega_p,
            beta_p,
            signal,
            idler,
        };
        pm.check_detuning(0.0)?;
        Ok(pm)
    }

    pub fn omega_p(&self) -> f64 {
        self.omega_p
    }

    pub fn omega0(&self) -> f64 {
        0.5 * self.omega_p
    }

    pub fn beta_p(&self) -> f64 {
        self.beta_p
    }

    pub fn signal(&self) -> &DispersionTable {
        &self.signal
    }

    pub fn idler(&self) -> &DispersionTable {
        &self.idler
    }

    /// Fails if `ω0 + Ω` or `ω0 - Ω` is outside the signal or idler table.
    pub fn check_detuning(&self, detuning: f64) -> Result<()> {
        let w0 = self.omega0();
        self.signal.beta_checked(w0 + detuning)?;
        self.idler.beta_checked(w0 - detuning)?;
        Ok(())
    }

    /// `Δk(Ω) = β_p - β_s(ω0 + Ω) - β_i(ω0 - Ω)`, rad/m.
    pub fn delta_k(&self, detuning: f64) -> f64 {
        let w0 = self.omega0();
        self.beta_p - (self.signal.beta(w0 + detuning) + self.idler.beta(w0 - detuning))
    }

    /// `s_k(Ω) = β_p + β_s(ω0 + Ω) + β_i(ω0 - Ω)`, rad/m.
    pub fn phase_sum(&self, detuning: f64) -> f64 {
        let w0 = self.omega0();
        self.beta_p + (self.signal.beta(w0 + detuning) + self.idler.beta(w0 - detuning))
    }

    /// Inverse group velocities (signal, idler) at ω0, ns/m.
    pub fn inverse_group_velocities(&self) -> Result<(f64, f64)> {
        let w0 = self.omega0();
        Ok((
            self.signal.inverse_group_velocity(w0)?,
            self.idler.inverse_group_velocity(w0)?,
        ))
    }

    /// `|∂β_s/∂Ω - ∂β_i/∂Ω|` at ω0, ns/m.
    pub fn group_velocity_mismatch(&self) -> Result<f64> {
        let (s, i) = self.inverse_group_velocities()?;
        Ok((s - i).abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::MaterialModel;
    use crate::modesolver::LayerStack;

    fn linear_table(spec: ModeSpec, n: f64) -> DispersionTable {
        let omega = omega_grid(1.3, 1.8, 60);
        let beta = omega.iter().map(|w| n * w / C).collect();
        DispersionTable::from_samples(spec, omega, beta).unwrap()
    }

    #[test]
    fn constant_index_is_exact() {
        let t = linear_table(ModeSpec::SIGNAL, 3.1);
        let (lo, hi) = t.omega_range();
        for i in 0..50 {
            let w = lo + (hi - lo) * (i as f64 + 0.3) / 50.0;
            assert!((t.beta(w) - 3.1 * w / C).abs() < 1e-9 * t.beta(w));
            assert!((t.n_eff(w) - 3.1).abs() < 1e-12);
        }
        let w0 = 0.5 * (lo + hi);
        let ivg = t.inverse_group_velocity(w0).unwrap();
        assert!((ivg - 3.1 / C * 1e9).abs() < 1e-9);
    }

    #[test]
    fn quadratic_tables_match_closed_form() {
        let w0 = omega_from_um(1.55);
        let (a_s, b_s, c_s) = (2.4e7, 1.05e-8, 3.0e-22);
        let (a_i, b_i, c_i) = (2.3e7, 1.06e-8, -2.0e-22);
        let omega = omega_grid(1.3, 1.8, 80);
        let mk = |a: f64, b: f64, c: f64, spec| {
            let beta = omega
                .iter()
                .map(|w| a + b * (w - w0) + c * (w - w0).powi(2))
                .collect();
            DispersionTable::from_samples(spec, omega.clone(), beta).unwrap()
        };
        let beta_p = 4.75e7;
        let pm = PhaseMismatch::new(
            2.0 * w0,
            beta_p,
            mk(a_s, b_s, c_s, ModeSpec::SIGNAL),
            mk(a_i, b_i, c_i, ModeSpec::IDLER),
        )
        .unwrap();
        for k in -20..=20 {
            let d = k as f64 * 2.0 * std::f64::consts::PI * 1e12;
            let exact = beta_p - (a_s + b_s * d + c_s * d * d) - (a_i - b_i * d + c_i * d * d);
            assert!(
                (pm.delta_k(d) - exact).abs() < 1e-10 * beta_p,
                "{}",
                pm.delta_k(d) - exact
            );
            assert!((pm.phase_sum(d) + pm.delta_k(d) - 2.0 * beta_p).abs() < 1e-12 * beta_p * 4.0);
        }
        assert!((pm.group_velocity_mismatch().unwrap() - (b_s - b_i).abs() * 1e9).abs() < 1e-9);
    }

    #[test]
    fn identical_tables_give_even_mismatch() {
        let t = linear_table(ModeSpec::SIGNAL, 3.0);
        let w0 = omega_from_um(1.55);
        let pm = PhaseMismatch::new(2.0 * w0, 6.0 * w0 / C, t.clone(), t).unwrap();
        for k in 1..30 {
            let d = k as f64 * 1e12;
            assert_eq!(pm.delta_k(d), pm.delta_k(-d));
            assert_eq!(pm.phase_sum(d), pm.phase_sum(-d));
        }
    }

    #[test]
    fn out_of_table_detuning_is_an_error() {
        let t = linear_table(ModeSpec::SIGNAL, 3.0);
        let w0 = omega_from_um(1.55);
        let pm = PhaseMismatch::new(2.0 * w0, 6.0 * w0 / C, t.clone(), t).unwrap();
        assert!(pm
            .check_detuning(2.0 * std::f64::consts::PI * 80e12)
            .is_err());
        assert!(pm
            .check_detuning(2.0 * std::f64::consts::PI * 10e12)
            .is_ok());
    }

    #[test]
    fn short_tables_are_rejected() {
        let s = ModeSolver::new(MaterialModel::default(), LayerStack::reference(), 0.05).unwrap();
        assert!(build_table(&s, ModeSpec::SIGNAL, (1.4, 1.7), 10).is_err());
    }
}
