//! End-to-end evaluation of one design: modes, dispersion, JSA, rates and
//! channels.

use crate::config::RunConfig;
use crate::consts::{omega_from_um, C};
use crate::dispersion::{build_table, find_phase_matched_pump, pump_beta, ModeSpec, PhaseMismatch};
use crate::error::Result;
use crate::modesolver::{GuidedMode, LateralSolution, LayerStack, ModeSolver};
use crate::profile::SeparableProfile;
use crate::spdc::{
    brightness_factor, compute_jsa, emission_rate, fiber_coupling, jsi_fwhm, overlap_gamma,
    pump_flux_per_mw, sigma, symmetric_detuning_grid, CouplingInputs, Jsa, Overlap,
};
use crate::wdm::{channel_report, ChannelGrid, ChannelReport};

/// A configuration bound to its mode solver.
#[derive(Debug, Clone)]
pub struct Simulation {
    config: RunConfig,
    solver: ModeSolver,
}

/// One solved field with its 2-D reduction.
#[derive(Debug, Clone)]
pub struct SolvedMode {
    pub spec: ModeSpec,
    pub vertical: GuidedMode,
    pub lateral: LateralSolution,
    pub profile: SeparableProfile,
    /// Vertical power fraction inside the core and the first bilayer on each side.
    pub confinement: f64,
}

impl SolvedMode {
    pub fn n_eff_2d(&self) -> f64 {
        self.lateral.n_eff
    }
}

/// Pump, signal and idler at the degenerate operating point.
#[derive(Debug, Clone)]
pub struct ModeSet {
    pub pump_um: f64,
    pub pump: SolvedMode,
    pub signal: SolvedMode,
    pub idler: SolvedMode,
}

/// Coupling constants and the total emission rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateReport {
    pub sigma: f64,
    pub overlap: Overlap,
    pub fiber_signal: f64,
    pub fiber_idler: f64,
    pub pump_flux_per_mw: f64,
    pub integrated_intensity: f64,
    pub brightness: f64,
    /// Pairs/s/mW generated in the waveguide.
    pub rate_per_mw: f64,
}

impl RateReport {
    /// Converts a band intensity (rad/s) to fiber-coupled pairs/s/mW.
    pub fn pair_rate_scale(&self, length_m: f64) -> f64 {
        self.sigma
            * self.sigma
            * length_m
            * length_m
            * self.pump_flux_per_mw
            * self.fiber_signal
            * self.fiber_idler
    }
}

/// JSA and its width for a phase-matching configuration.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub pump_um: f64,
    pub phase: PhaseMismatch,
    pub jsa: Jsa,
    pub fwhm_nm: f64,
}

impl Simulation {
    pub fn new(config: RunConfig) -> Result<Self> {
        config.validate()?;
        let solver = ModeSolver::new(
            config.material_model()?,
            config.stack.clone(),
            config.lateral.index_contrast,
        )?;
        Ok(Self { config, solver })
    }

    /// Same settings with a different stack.
    pub fn with_stack(&self, stack: LayerStack) -> Result<Self> {
        let mut config = self.config.clone();
        config.stack = stack;
        Self::new(config)
    }

    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    pub fn solver(&self) -> &ModeSolver {
        &self.solver
    }

    pub fn length_m(&self) -> f64 {
        self.config.stack.length_m()
    }

    /// Pump wavelength in um, retuned to phase matching if configured.
    pub fn pump_wavelength_um(&self) -> Result<f64> {
        let nominal = self.config.pump.wavelength_nm * 1e-3;
        if self.config.pump.phase_match_search {
            find_phase_matched_pump(
                &self.solver,
                nominal,
                self.config.pump.search_window_nm * 1e-3,
            )
        } else {
            Ok(nominal)
        }
    }

    /// Signal and idler tables plus the pump constant at `pump_um`.
    pub fn phase_mismatch(&self, pump_um: f64) -> Result<PhaseMismatch> {
        let d = &self.config.dispersion;
        let band = (d.lambda_min_nm * 1e-3, d.lambda_max_nm * 1e-3);
        let (signal, idler) = rayon::join(
            || build_table(&self.solver, ModeSpec::SIGNAL, band, d.samples),
            || build_table(&self.solver, ModeSpec::IDLER, band, d.samples),
        );
        let beta_p = pump_beta(&self.solver, ModeSpec::PUMP, pump_um)?;
        PhaseMismatch::new(omega_from_um(pump_um), beta_p, signal?, idler?)
    }

    pub fn detuning_grid(&self) -> Result<Vec<f64>> {
        let j = &self.config.jsa;
        symmetric_detuning_grid(
            2.0 * std::f64::consts::PI * j.half_span_thz * 1e12,
            j.samples,
        )
    }

    pub fn spectrum(&self) -> Result<SpectrumResult> {
        let pump_um = self.pump_wavelength_um()?;
        self.spectrum_at(pump_um)
    }

    pub fn spectrum_at(&self, pump_um: f64) -> Result<SpectrumResult> {
        let phase = self.phase_mismatch(pump_um)?;
        let jsa = compute_jsa(&phase, self.length_m(), &self.detuning_grid()?)?;
        let fwhm_nm = jsi_fwhm(&jsa)?;
        Ok(SpectrumResult {
            pump_um,
            phase,
            jsa,
            fwhm_nm,
        })
    }

    fn solve_mode(&self, spec: ModeSpec, wavelength_um: f64) -> Result<SolvedMode> {
        let vertical = self
            .solver
            .find_mode(wavelength_um, spec.polarization, spec.class)?;
        let lateral = self
            .solver
            .lateral(vertical.n_eff, wavelength_um, spec.polarization);
        let profile = self.solver.mode_profile_2d(&vertical, &lateral)?;
        let stack = self.solver.stack();
        let confinement = vertical
            .profile
            .power_fraction_within(0.5 * stack.core.thickness_um() + stack.period_um());
        Ok(SolvedMode {
            spec,
            vertical,
            lateral,
            profile,
            confinement,
        })
    }

    /// Pump at `pump_um`, signal and idler at the degenerate wavelength.
    pub fn modes_at(&self, pump_um: f64) -> Result<ModeSet> {
        let daughter = 2.0 * pump_um;
        let (pump, (signal, idler)) = rayon::join(
            || self.solve_mode(ModeSpec::PUMP, pump_um),
            || {
                rayon::join(
                    || self.solve_mode(ModeSpec::SIGNAL, daughter),
                    || self.solve_mode(ModeSpec::IDLER, daughter),
                )
            },
        );
        Ok(ModeSet {
            pump_um,
            pump: pump?,
            signal: signal?,
            idler: idler?,
        })
    }

    /// σ, overlap, fiber coupling and the emission rate for a spectrum.
    pub fn rate(&self, spectrum: &SpectrumResult) -> Result<(ModeSet, RateReport)> {
        let modes = self.modes_at(spectrum.pump_um)?;
        let overlap = overlap_gamma(
            &modes.pump.profile,
            &modes.signal.profile,
            &modes.idler.profile,
        )?;
        let omega_p = omega_from_um(spectrum.pump_um);
        let omega0 = 0.5 * omega_p;
        let inputs = CouplingInputs {
            omega0,
            omega_p,
            chi2_pm_per_v: self.config.nonlinear.chi2_pm_per_v,
            gamma_per_m: overlap.gamma_per_m,
            n_s: spectrum.phase.signal().n_eff(omega0),
            n_i: spectrum.phase.idler().n_eff(omega0),
            n_p: spectrum.phase.beta_p() * C / omega_p,
        };
        let s = sigma(&inputs);
        let fiber = self.config.fiber_mode()?;
        let report = RateReport {
            sigma: s,
            overlap,
            fiber_signal: fiber_coupling(&modes.signal.profile, &fiber)?,
            fiber_idler: fiber_coupling(&modes.idler.profile, &fiber)?,
            pump_flux_per_mw: pump_flux_per_mw(omega_p),
            integrated_intensity: spectrum.jsa.integrated_intensity(),
            brightness: brightness_factor(&spectrum.jsa, s),
            rate_per_mw: emission_rate(&spectrum.jsa, s)?,
        };
        Ok((modes, report))
    }

    pub fn channel_grid(&self, omega0: f64) -> Result<ChannelGrid> {
        let c = &self.config.channels;
        ChannelGrid::new(omega0, c.spacing_ghz, c.bandwidth_ghz, c.n_max)
    }

    /// Channel report; pair rates need the coupling report.
    pub fn channels(
        &self,
        spectrum: &SpectrumResult,
        rate: Option<&RateReport>,
    ) -> Result<ChannelReport> {
        let grid = self.channel_grid(spectrum.jsa.omega0())?;
        let scale = rate.map_or(0.0, |r| r.pair_rate_scale(self.length_m()));
        channel_report(&spectrum.jsa, &grid, scale)
    }
}
