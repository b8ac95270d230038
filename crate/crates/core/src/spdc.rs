//! Joint spectral amplitude, nonlinear coupling, emission rate and fiber
//! coupling of the down-converted pair.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::consts::{um_from_omega, C, EPS0, HBAR};
use crate::dispersion::{degenerate_mismatch, PhaseMismatch};
use crate::error::{Error, Result};
use crate::materials::FiberMode;
use crate::modesolver::LayerStack;
use crate::pipeline::Simulation;
use crate::profile::{trapezoid, SeparableProfile};

/// Pump power that rates are normalized to, W.
pub const RATE_REFERENCE_POWER_W: f64 = 1e-3;
/// Largest edge-to-peak JSI ratio accepted for a band-integrated rate.
pub const EDGE_FRACTION_LIMIT: f64 = 0.01;

/// `sin(x)/x`, with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// `samples` detunings `k h`, `k = -m..=m`, spanning `±half_span` (rad/s).
pub fn symmetric_detuning_grid(half_span: f64, samples: usize) -> Result<Vec<f64>> {
    if samples < 3 || samples.is_multiple_of(2) {
        return Err(Error::domain(
            "jsa_samples",
            samples as f64,
            "need an odd number of samples, at least 3",
        ));
    }
    if !(half_span > 0.0) || !half_span.is_finite() {
        return Err(Error::domain(
            "jsa_half_span",
            half_span,
            "must be positive",
        ));
    }
    let m = (samples / 2) as i64;
    let h = half_span / m as f64;
    Ok((-m..=m).map(|k| k as f64 * h).collect())
}

fn check_symmetric_uniform(detuning: &[f64]) -> Result<()> {
    let n = detuning.len();
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::Contract(format!(
            "detuning grid needs an odd number (>= 3) of samples, got {n}"
        )));
    }
    let h = detuning[1] - detuning[0];
    let scale = detuning[n - 1].abs().max(detuning[0].abs());
    let tol = 1e-9 * scale;
    let symmetric = (0..n).all(|i| (detuning[i] + detuning[n - 1 - i]).abs() <= tol);
    let uniform = h > 0.0
        && detuning
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h).abs() <= tol);
    if symmetric && uniform {
        Ok(())
    } else {
        Err(Error::Contract(
            "detuning grid must be uniform and symmetric about zero".into(),
        ))
    }
}

/// Sampled joint spectral amplitude `Φ(Ω)` on a symmetric detuning grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Jsa {
    detuning: Vec<f64>,
    phi: Vec<Complex64>,
    omega0: f64,
    length_m: f64,
}

impl Jsa {
    /// Wraps precomputed samples; the grid must be uniform and symmetric.
    pub fn from_samples(
        detuning: Vec<f64>,
        phi: Vec<Complex64>,
        omega0: f64,
        length_m: f64,
    ) -> Result<Self> {
        check_symmetric_uniform(&detuning)?;
        if phi.len() != detuning.len() {
            return Err(Error::Contract(format!(
                "{} amplitudes for {} detunings",
                phi.len(),
                detuning.len()
            )));
        }
        Ok(Self {
            detuning,
            phi,
            omega0,
            length_m,
        })
    }

    pub fn detuning(&self) -> &[f64] {
        &self.detuning
    }

    pub fn phi(&self) -> &[Complex64] {
        &self.phi
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn length_m(&self) -> f64 {
        self.length_m
    }

    pub fn len(&self) -> usize {
        self.detuning.len()
    }

    pub fn is_empty(&self) -> bool {
        self.detuning.is_empty()
    }

    pub fn step(&self) -> f64 {
        self.detuning[1] - self.detuning[0]
    }

    /// Joint spectral intensity `|Φ|²`.
    pub fn jsi(&self) -> Vec<f64> {
        self.phi.iter().map(|p| p.norm_sqr()).collect()
    }

    /// Signal vacuum wavelength of sample `i`, nm.
    pub fn signal_wavelength_nm(&self, i: usize) -> f64 {
        um_from_omega(self.omega0 + self.detuning[i]) * 1e3
    }

    /// Larger of the two edge intensities relative to the peak.
    pub fn edge_fraction(&self) -> f64 {
        let jsi = self.jsi();
        let peak = jsi.iter().cloned().fold(0.0, f64::max);
        jsi[0].max(jsi[jsi.len() - 1]) / peak
    }

    /// `∫ |Φ(Ω)|² dΩ`, rad/s.
    pub fn integrated_intensity(&self) -> f64 {
        trapezoid(&self.jsi(), self.step())
    }

    /// CSV rows: lambda_signal_nm, re_phi, im_phi, jsi.
    pub fn rows(&self) -> Vec<[f64; 4]> {
        (0..self.len())
            .map(|i| {
                let p = self.phi[i];
                [self.signal_wavelength_nm(i), p.re, p.im, p.norm_sqr()]
            })
            .collect()
    }
}

/// `Φ(Ω) = sinc(Δk L/2) exp(i s_k L/2)` on the detuning grid.
pub fn compute_jsa(pm: &PhaseMismatch, length_m: f64, detuning: &[f64]) -> Result<Jsa> {
    check_symmetric_uniform(detuning)?;
    pm.check_detuning(detuning[0])?;
    pm.check_detuning(detuning[detuning.len() - 1])?;
    let half = 0.5 * length_m;
    let phi = detuning
        .par_iter()
        .map(|&d| {
            let amp = sinc(pm.delta_k(d) * half);
            Complex64::from_polar(1.0, pm.phase_sum(d) * half) * amp
        })
        .collect();
    Jsa::from_samples(detuning.to_vec(), phi, pm.omega0(), length_m)
}

/// Full width at half maximum of `|Φ|²` in signal wavelength, nm.
///
/// The half-power crossings are located by linear interpolation between
/// samples. If the half-power region reaches a grid edge the width is
/// undefined and an error is returned.
pub fn jsi_fwhm(jsa: &Jsa) -> Result<f64> {
    let jsi = jsa.jsi();
    let (peak_i, peak) =
        jsi.iter()
            .cloned()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
            );
    if !(peak > 0.0) {
        return Err(Error::Clipped("joint spectral intensity vanishes".into()));
    }
    let half = 0.5 * peak;
    let n = jsi.len();
    let clipped = || Error::Clipped("half-power point lies outside the detuning grid".into());
    let mut right = peak_i;
    while jsi[right] >= half {
        right += 1;
        if right == n {
            return Err(clipped());
        }
    }
    let mut left = peak_i;
    while jsi[left] >= half {
        if left == 0 {
            return Err(clipped());
        }
        left -= 1;
    }
    let cross = |i: usize, j: usize| {
        let (li, lj) = (jsa.signal_wavelength_nm(i), jsa.signal_wavelength_nm(j));
        li + (half - jsi[i]) * (lj - li) / (jsi[j] - jsi[i])
    };
    Ok((cross(left, left + 1) - cross(right - 1, right)).abs())
}

/// Spatial overlap `Γ` and effective area of the three interacting modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Overlap {
    /// `|∫ U_p U_s U_i dx dy|`, 1/m.
    pub gamma_per_m: f64,
    /// `1/Γ²`, um².
    pub a_eff_um2: f64,
}

/// Overlap of normalized separable profiles (positions in um).
pub fn overlap_gamma(
    pump: &SeparableProfile,
    signal: &SeparableProfile,
    idler: &SeparableProfile,
) -> Result<Overlap> {
    let g_um = SeparableProfile::triple_overlap(pump, signal, idler)?.abs();
    Ok(Overlap {
        gamma_per_m: g_um * 1e6,
        a_eff_um2: if g_um > 0.0 {
            1.0 / (g_um * g_um)
        } else {
            f64::INFINITY
        },
    })
}

/// Inputs of the nonlinear coupling constant, SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingInputs {
    pub omega0: f64,
    pub omega_p: f64,
    /// χ⁽²⁾ in pm/V.
    pub chi2_pm_per_v: f64,
    pub gamma_per_m: f64,
    pub n_s: f64,
    pub n_i: f64,
    pub n_p: f64,
}

/// `σ = [ħ ω0² ωp χ² Γ² / (16π ε0 c³ n_s n_i n_p)]^(1/2)`, in s^(1/2)/m.
pub fn sigma(inp: &CouplingInputs) -> f64 {
    let chi = inp.chi2_pm_per_v * 1e-12;
    let num = HBAR
        * inp.omega0
        * inp.omega0
        * inp.omega_p
        * chi
        * chi
        * inp.gamma_per_m
        * inp.gamma_per_m;
    let den = 16.0 * std::f64::consts::PI * EPS0 * C.powi(3) * inp.n_s * inp.n_i * inp.n_p;
    (num / den).sqrt()
}

/// Pump photon flux at the reference power, photons/s.
pub fn pump_flux_per_mw(omega_p: f64) -> f64 {
    RATE_REFERENCE_POWER_W / (HBAR * omega_p)
}

/// Dimensionless pair probability per pump photon, `σ² L² ∫|Φ|² dΩ`.
pub fn brightness_factor(jsa: &Jsa, sigma: f64) -> f64 {
    sigma * sigma * jsa.length_m * jsa.length_m * jsa.integrated_intensity()
}

/// Total pair emission rate per mW of pump, photons/s/mW.
///
/// The JSA must cover the emission band: the edge intensity has to be
/// below [`EDGE_FRACTION_LIMIT`] of the peak.
pub fn emission_rate(jsa: &Jsa, sigma: f64) -> Result<f64> {
    let edge = jsa.edge_fraction();
    if !(edge < EDGE_FRACTION_LIMIT) {
        return Err(Error::Clipped(format!(
            "JSI at the grid edge is {:.3}% of the peak; widen the detuning span",
            edge * 100.0
        )));
    }
    Ok(brightness_factor(jsa, sigma) * pump_flux_per_mw(2.0 * jsa.omega0))
}

/// Power coupling `|∫ U U_0 dx dy|²` between a guided mode and a fiber.
pub fn fiber_coupling(mode: &SeparableProfile, fiber: &FiberMode) -> Result<f64> {
    let f = fiber.fundamental_profile(*mode.x.grid(), *mode.y.grid())?;
    Ok(mode.overlap(&f)?.powi(2))
}

/// Stack field perturbed by a sensitivity scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StackParameter {
    CoreAlFraction,
    CoreThickness,
    Reflector1AlFraction,
    Reflector1Thickness,
    Reflector2AlFraction,
    Reflector2Thickness,
    RidgeWidth,
}

impl StackParameter {
    pub const ALL: [StackParameter; 7] = [
        StackParameter::CoreAlFraction,
        StackParameter::CoreThickness,
        StackParameter::Reflector1AlFraction,
        StackParameter::Reflector1Thickness,
        StackParameter::Reflector2AlFraction,
        StackParameter::Reflector2Thickness,
        StackParameter::RidgeWidth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StackParameter::CoreAlFraction => "core_al_fraction",
            StackParameter::CoreThickness => "core_thickness_nm",
            StackParameter::Reflector1AlFraction => "reflector1_al_fraction",
            StackParameter::Reflector1Thickness => "reflector1_thickness_nm",
            StackParameter::Reflector2AlFraction => "reflector2_al_fraction",
            StackParameter::Reflector2Thickness => "reflector2_thickness_nm",
            StackParameter::RidgeWidth => "ridge_width_nm",
        }
    }

    /// Unknown names are configuration errors.
    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| {
                let known: Vec<&str> = Self::ALL.iter().map(|p| p.name()).collect();
                Error::Config(format!(
                    "unknown stack parameter '{name}' (expected one of {})",
                    known.join(", ")
                ))
            })
    }

    fn slot(self, stack: &mut LayerStack) -> &mut f64 {
        match self {
            StackParameter::CoreAlFraction => &mut stack.core.al_fraction,
            StackParameter::CoreThickness => &mut stack.core.thickness_nm,
            StackParameter::Reflector1AlFraction => &mut stack.reflector[0].al_fraction,
            StackParameter::Reflector1Thickness => &mut stack.reflector[0].thickness_nm,
            StackParameter::Reflector2AlFraction => &mut stack.reflector[1].al_fraction,
            StackParameter::Reflector2Thickness => &mut stack.reflector[1].thickness_nm,
            StackParameter::RidgeWidth => &mut stack.ridge_width_nm,
        }
    }

    pub fn get(self, stack: &LayerStack) -> f64 {
        let mut s = stack.clone();
        *self.slot(&mut s)
    }

    /// Copy of `stack` with this field scaled by `1 + relative_delta`.
    pub fn perturbed(self, stack: &LayerStack, relative_delta: f64) -> LayerStack {
        let mut s = stack.clone();
        let v = self.slot(&mut s);
        *v *= 1.0 + relative_delta;
        s
    }
}

/// One perturbed design.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityRow {
    pub delta: f64,
    pub value: f64,
    /// Pump wavelength the spectrum was evaluated at, nm.
    pub pump_nm: f64,
    /// Degenerate (central) signal wavelength `2 λp`, nm.
    pub center_nm: f64,
    /// Change of the central wavelength against the unperturbed design, nm.
    pub center_shift_nm: f64,
    pub fwhm_nm: f64,
    /// `Δk(0)` of the perturbed stack at the unperturbed pump wavelength, rad/m.
    pub delta_k0: f64,
    /// Channels with concurrence above the first configured threshold.
    pub channels_above: usize,
}

/// Re-runs the spectrum and channel pipeline with one stack field scaled
/// by `1 + delta` for each delta.
pub fn sensitivity_scan(
    sim: &Simulation,
    parameter: StackParameter,
    deltas: &[f64],
) -> Result<Vec<SensitivityRow>> {
    let base_stack = sim.config().stack.clone();
    let base_pump = sim.pump_wavelength_um()?;
    let threshold = sim
        .config()
        .channels
        .thresholds
        .first()
        .copied()
        .unwrap_or(0.9);
    deltas
        .iter()
        .map(|&delta| {
            let stack = parameter.perturbed(&base_stack, delta);
            let value = parameter.get(&stack);
            let run = if delta == 0.0 {
                sim.clone()
            } else {
                sim.with_stack(stack)?
            };
            let spectrum = run.spectrum()?;
            let channels = run.channels(&spectrum, None)?;
            let delta_k0 = degenerate_mismatch(run.solver(), base_pump)?;
            Ok(SensitivityRow {
                delta,
                value,
                pump_nm: spectrum.pump_um * 1e3,
                center_nm: 2.0 * spectrum.pump_um * 1e3,
                center_shift_nm: 2.0 * (spectrum.pump_um - base_pump) * 1e3,
                fwhm_nm: spectrum.fwhm_nm,
                delta_k0,
                channels_above: channels.channels_above(threshold).contiguous,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::consts::omega_from_um;
    use crate::dispersion::{DispersionTable, ModeSpec};
    use crate::materials::gaussian_mode_match;
    use crate::profile::{Grid1d, Profile1d};
    use approx::assert_relative_eq;

    /// Half-power argument of sinc², from a direct root find.
    fn sinc2_half_point() -> f64 {
        crate::roots::bisect(1.0, 2.0, 1e-15, |x| sinc(x).powi(2) - 0.5)
    }

    /// Signal and idler tables with `β_s - β_i` linear in detuning.
    fn linear_mismatch(d: f64) -> PhaseMismatch {
        let w0 = omega_from_um(1.55);
        let omega = crate::dispersion::omega_grid(1.2, 2.0, 200);
        let n = 3.0;
        let mk = |slope: f64, spec| {
            let beta = omega.iter().map(|w| n * w / C + slope * (w - w0)).collect();
            DispersionTable::from_samples(spec, omega.clone(), beta).unwrap()
        };
        // Δk(Ω) = -(ks - ki)Ω with the constant parts cancelling.
        let pm = PhaseMismatch::new(
            2.0 * w0,
            2.0 * n * w0 / C,
            mk(-d / 2.0, ModeSpec::SIGNAL),
            mk(d / 2.0, ModeSpec::IDLER),
        );
        pm.unwrap()
    }

    #[test]
    fn sinc_half_power_point() {
        assert!((sinc2_half_point() - 1.39156).abs() < 1e-5);
    }

    #[test]
    fn perfect_matching_gives_unit_modulus() {
        let pm = linear_mismatch(0.0);
        let grid = symmetric_detuning_grid(2.0 * std::f64::consts::PI * 20e12, 401).unwrap();
        let jsa = compute_jsa(&pm, 1e-3, &grid).unwrap();
        for p in jsa.phi() {
            assert!((p.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn linear_mismatch_width_matches_sinc_oracle() {
        let d = 2e-10; // s/m
        let l = 1e-3;
        let pm = linear_mismatch(d);
        let grid = symmetric_detuning_grid(2.0 * std::f64::consts::PI * 25e12, 4097).unwrap();
        let jsa = compute_jsa(&pm, l, &grid).unwrap();
        let x = sinc2_half_point();
        let omega_half = 2.0 * x / (d * l);
        let w0 = pm.omega0();
        let exact_nm = (um_from_omega(w0 - omega_half) - um_from_omega(w0 + omega_half)) * 1e3;
        let ours = jsi_fwhm(&jsa).unwrap();
        assert!(
            ((ours - exact_nm) / exact_nm).abs() < 1e-3,
            "{ours} vs {exact_nm}"
        );
        for p in jsa.phi() {
            assert!(p.norm() <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn clipped_spectrum_is_an_error() {
        let pm = linear_mismatch(2e-10);
        let grid = symmetric_detuning_grid(2.0 * std::f64::consts::PI * 1e12, 101).unwrap();
        let jsa = compute_jsa(&pm, 1e-3, &grid).unwrap();
        assert!(matches!(jsi_fwhm(&jsa), Err(Error::Clipped(_))));
        assert!(matches!(emission_rate(&jsa, 1.0), Err(Error::Clipped(_))));
    }

    #[test]
    fn asymmetric_grid_is_rejected() {
        let pm = linear_mismatch(1e-10);
        let grid: Vec<f64> = (0..101).map(|i| i as f64 * 1e11).collect();
        assert!(matches!(
            compute_jsa(&pm, 1e-3, &grid),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn identical_tables_give_even_amplitude() {
        let w0 = omega_from_um(1.55);
        let omega = crate::dispersion::omega_grid(1.2, 2.0, 120);
        let beta: Vec<f64> = omega
            .iter()
            .map(|w| 3.0 * w / C + 1e-22 * (w - w0).powi(2))
            .collect();
        let t = DispersionTable::from_samples(ModeSpec::SIGNAL, omega, beta).unwrap();
        let pm = PhaseMismatch::new(2.0 * w0, 6.0 * w0 / C, t.clone(), t).unwrap();
        let grid = symmetric_detuning_grid(2.0 * std::f64::consts::PI * 20e12, 801).unwrap();
        let jsa = compute_jsa(&pm, 1e-3, &grid).unwrap();
        let n = jsa.len();
        for i in 0..n {
            assert_eq!(jsa.phi()[i], jsa.phi()[n - 1 - i]);
        }
    }

    fn gaussian(w: f64, grid: Grid1d) -> Profile1d {
        Profile1d::from_fn(grid, |u| (-(u * u) / (w * w)).exp())
            .normalized()
            .unwrap()
    }

    #[test]
    fn triple_gaussian_overlap_matches_closed_form() {
        let g = Grid1d::symmetric(15.0, 0.005).unwrap();
        for w in [1.0, 2.5, 4.0] {
            let p = SeparableProfile::new(gaussian(w, g), gaussian(w, g));
            let ov = overlap_gamma(&p, &p, &p).unwrap();
            let exact_um = (2.0 / (3.0 * std::f64::consts::PI * w * w)).sqrt() * 2.0 / 3f64.sqrt();
            assert!((ov.gamma_per_m * 1e-6 - exact_um).abs() < 1e-6 * exact_um);
            assert_relative_eq!(
                ov.a_eff_um2,
                1.0 / (exact_um * exact_um),
                max_relative = 1e-6
            );
        }
    }

    #[test]
    fn odd_pump_gives_zero_overlap() {
        let g = Grid1d::symmetric(10.0, 0.01).unwrap();
        let even = SeparableProfile::new(gaussian(2.0, g), gaussian(2.0, g));
        let odd_y = Profile1d::from_fn(g, |u| u * (-(u * u) / 4.0).exp())
            .normalized()
            .unwrap();
        let odd = SeparableProfile::new(gaussian(2.0, g), odd_y);
        assert!(overlap_gamma(&odd, &even, &even).unwrap().gamma_per_m.abs() < 1e-6);
    }

    fn inputs() -> CouplingInputs {
        CouplingInputs {
            omega0: omega_from_um(1.55),
            omega_p: omega_from_um(0.775),
            chi2_pm_per_v: 238.0,
            gamma_per_m: 1.0 / 35.3f64.sqrt() * 1e6,
            n_s: 3.0,
            n_i: 3.0,
            n_p: 3.0,
        }
    }

    #[test]
    fn sigma_scaling() {
        let base = sigma(&inputs());
        assert!(base > 0.0);
        assert_eq!(
            sigma(&CouplingInputs {
                chi2_pm_per_v: 0.0,
                ..inputs()
            }),
            0.0
        );
        let doubled = sigma(&CouplingInputs {
            gamma_per_m: 2.0 * inputs().gamma_per_m,
            ..inputs()
        });
        assert_relative_eq!(doubled, 2.0 * base, max_relative = 1e-14);
    }

    /// Exponents of (kg, m, s, A) carried alongside each factor.
    #[derive(Debug, Clone, Copy, PartialEq)]
    struct Dim([i32; 4]);
    impl std::ops::Mul for Dim {
        type Output = Dim;
        fn mul(self, o: Dim) -> Dim {
            Dim(std::array::from_fn(|k| self.0[k] + o.0[k]))
        }
    }
    impl std::ops::Div for Dim {
        type Output = Dim;
        fn div(self, o: Dim) -> Dim {
            Dim(std::array::from_fn(|k| self.0[k] - o.0[k]))
        }
    }

    #[test]
    fn emission_rate_has_units_of_inverse_seconds() {
        let one = Dim([0, 0, 0, 0]);
        let joule = Dim([1, 2, -2, 0]);
        let second = Dim([0, 0, 1, 0]);
        let metre = Dim([0, 1, 0, 0]);
        let volt = joule / Dim([0, 0, 1, 1]); // J/C
        let farad = Dim([0, 0, 1, 1]) / volt; // C/V
        let hbar = joule * second;
        let omega = one / second;
        let chi = metre / volt;
        let gamma = one / metre;
        let eps0 = farad / metre;
        let c = metre / second;
        let sigma_sq =
            hbar * omega * omega * omega * chi * chi * gamma * gamma / (eps0 * c * c * c);
        assert_eq!(sigma_sq, second / (metre * metre));
        let rate = sigma_sq * metre * metre * omega * (one / second);
        assert_eq!(rate, one / second);
    }

    #[test]
    fn rate_quadruples_with_length_at_perfect_matching() {
        let pm = linear_mismatch(0.0);
        let grid = symmetric_detuning_grid(2.0 * std::f64::consts::PI * 20e12, 401).unwrap();
        let mut a = compute_jsa(&pm, 1e-3, &grid).unwrap();
        let mut b = compute_jsa(&pm, 2e-3, &grid).unwrap();
        // Perfect matching is flat; fake a band-limited spectrum by
        // tapering both equally so the edge guard is satisfied.
        for jsa in [&mut a, &mut b] {
            let n = jsa.len();
            for i in 0..n {
                let t = (i as f64 - (n / 2) as f64) / (n / 8) as f64;
                jsa.phi[i] *= (-(t * t)).exp();
            }
        }
        let s = sigma(&inputs());
        let ra = emission_rate(&a, s).unwrap();
        let rb = emission_rate(&b, s).unwrap();
        assert_relative_eq!(rb, 4.0 * ra, max_relative = 1e-12);
    }

    #[test]
    fn fiber_coupling_of_gaussians() {
        let gx = Grid1d::symmetric(20.0, 0.01).unwrap();
        let gy = Grid1d::symmetric(15.0, 0.001).unwrap();
        let fiber = FiberMode::default();
        let same = fiber.fundamental_profile(gx, gy).unwrap();
        assert!((fiber_coupling(&same, &fiber).unwrap() - 1.0).abs() < 1e-9);
        let narrow = FiberMode::new(6.0, 1.55)
            .unwrap()
            .fundamental_profile(gx, gy)
            .unwrap();
        let eta = fiber_coupling(&narrow, &fiber).unwrap();
        assert!((eta - gaussian_mode_match(3.0, 5.2)).abs() < 1e-6);
    }
}
