//! Run configuration (TOML, strict schema).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::materials::{FiberMode, MaterialModel};
use crate::modesolver::LayerStack;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub stack: LayerStack,
    #[serde(default)]
    pub material: MaterialSettings,
    #[serde(default)]
    pub lateral: LateralSettings,
    #[serde(default)]
    pub pump: PumpSettings,
    #[serde(default)]
    pub dispersion: DispersionSettings,
    #[serde(default)]
    pub jsa: JsaSettings,
    #[serde(default)]
    pub channels: ChannelSettings,
    #[serde(default)]
    pub fiber: FiberSettings,
    #[serde(default)]
    pub nonlinear: NonlinearSettings,
    #[serde(default)]
    pub optimizer: OptimizerSettings,
    #[serde(default)]
    pub sensitivity: SensitivitySettings,
    #[serde(default)]
    pub output: OutputSettings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MaterialSettings {
    pub temperature_k: f64,
}

impl Default for MaterialSettings {
    fn default() -> Self {
        Self {
            temperature_k: 295.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LateralSettings {
    /// Index step between the ridge and the unetched region.
    pub index_contrast: f64,
}

impl Default for LateralSettings {
    fn default() -> Self {
        Self {
            index_contrast: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PumpSettings {
    pub wavelength_nm: f64,
    /// Retune the pump to exact degenerate phase matching near `wavelength_nm`.
    pub phase_match_search: bool,
    pub search_window_nm: f64,
}

impl Default for PumpSettings {
    fn default() -> Self {
        Self {
            wavelength_nm: 775.1,
            phase_match_search: true,
            search_window_nm: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DispersionSettings {
    pub lambda_min_nm: f64,
    pub lambda_max_nm: f64,
    pub samples: usize,
}

impl Default for DispersionSettings {
    fn default() -> Self {
        Self {
            lambda_min_nm: 1340.0,
            lambda_max_nm: 1800.0,
            samples: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct JsaSettings {
    pub half_span_thz: f64,
    pub samples: usize,
}

impl Default for JsaSettings {
    fn default() -> Self {
        Self {
            half_span_thz: 25.0,
            samples: 4097,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChannelSettings {
    pub spacing_ghz: f64,
    pub bandwidth_ghz: f64,
    pub n_max: usize,
    pub thresholds: Vec<f64>,
}

impl Default for ChannelSettings {
    fn default() -> Self {
        Self {
            spacing_ghz: 50.0,
            bandwidth_ghz: 50.0,
            n_max: 200,
            thresholds: vec![0.9, 0.95, 0.99],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FiberSettings {
    pub mode_field_diameter_um: f64,
    pub center_wavelength_um: f64,
}

impl Default for FiberSettings {
    fn default() -> Self {
        let f = FiberMode::default();
        Self {
            mode_field_diameter_um: f.mode_field_diameter_um(),
            center_wavelength_um: f.center_wavelength_um(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NonlinearSettings {
    pub chi2_pm_per_v: f64,
}

impl Default for NonlinearSettings {
    fn default() -> Self {
        Self {
            chi2_pm_per_v: 2.0 * 119.0,
        }
    }
}

/// Inclusive `[lower, upper]` bounds of the seven design genes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneBounds {
    pub core_thickness_nm: [f64; 2],
    pub reflector1_thickness_nm: [f64; 2],
    pub reflector2_thickness_nm: [f64; 2],
    pub core_al_fraction: [f64; 2],
    pub reflector1_al_fraction: [f64; 2],
    pub reflector2_al_fraction: [f64; 2],
    pub ridge_width_nm: [f64; 2],
}

impl GeneBounds {
    /// Every stack parameter of `stack` scaled by `1 ± fraction`.
    pub fn around(stack: &LayerStack, fraction: f64) -> Self {
        let b = |v: f64| [v * (1.0 - fraction), v * (1.0 + fraction)];
        let x = |v: f64| [v * (1.0 - fraction), (v * (1.0 + fraction)).min(1.0)];
        Self {
            core_thickness_nm: b(stack.core.thickness_nm),
            reflector1_thickness_nm: b(stack.reflector[0].thickness_nm),
            reflector2_thickness_nm: b(stack.reflector[1].thickness_nm),
            core_al_fraction: x(stack.core.al_fraction),
            reflector1_al_fraction: x(stack.reflector[0].al_fraction),
            reflector2_al_fraction: x(stack.reflector[1].al_fraction),
            ridge_width_nm: b(stack.ridge_width_nm),
        }
    }

    pub fn as_array(&self) -> [[f64; 2]; 7] {
        [
            self.core_thickness_nm,
            self.reflector1_thickness_nm,
            self.reflector2_thickness_nm,
            self.core_al_fraction,
            self.reflector1_al_fraction,
            self.reflector2_al_fraction,
            self.ridge_width_nm,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimizerSettings {
    pub population: usize,
    pub generations: usize,
    pub seed: u64,
    pub tournament_size: usize,
    pub crossover_rate: f64,
    pub crossover_eta: f64,
    pub mutation_rate: f64,
    pub mutation_sigma_fraction: f64,
    pub elite_count: usize,
    pub weight_phase: f64,
    pub weight_gvm: f64,
    pub freeze_ridge_width: bool,
    /// Optimize the sphere benchmark instead of the waveguide.
    pub sphere_benchmark: bool,
    pub bounds: Option<GeneBounds>,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            population: 32,
            generations: 30,
            seed: 1,
            tournament_size: 3,
            crossover_rate: 0.9,
            crossover_eta: 15.0,
            mutation_rate: 0.1,
            mutation_sigma_fraction: 0.02,
            elite_count: 2,
            weight_phase: 1.0,
            weight_gvm: 10.0,
            freeze_ridge_width: false,
            sphere_benchmark: false,
            bounds: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SensitivitySettings {
    pub parameter: String,
    pub deltas: Vec<f64>,
}

impl Default for SensitivitySettings {
    fn default() -> Self {
        Self {
            parameter: "core_al_fraction".into(),
            deltas: vec![-0.1, -0.05, 0.0, 0.05, 0.1],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSettings {
    pub directory: String,
}

impl Default for OutputSettings {
    fn default() -> Self {
        Self {
            directory: "out".into(),
        }
    }
}

impl RunConfig {
    /// The reference design with default numerical settings.
    pub fn reference() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            stack: LayerStack::reference(),
            material: Default::default(),
            lateral: Default::default(),
            pump: Default::default(),
            dispersion: Default::default(),
            jsa: Default::default(),
            channels: Default::default(),
            fiber: Default::default(),
            nonlinear: Default::default(),
            optimizer: Default::default(),
            sensitivity: Default::default(),
            output: Default::default(),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Semantic checks; every failure is reported as a config error.
    pub fn validate(&self) -> Result<()> {
        let cfg_err = |e: Error| Error::Config(e.to_string());
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        self.stack.validate().map_err(cfg_err)?;
        self.material_model().map_err(cfg_err)?;
        self.fiber_mode().map_err(cfg_err)?;
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive, got {v}")))
            }
        };
        positive("pump.wavelength_nm", self.pump.wavelength_nm)?;
        if self.pump.phase_match_search {
            positive("pump.search_window_nm", self.pump.search_window_nm)?;
        }
        positive("dispersion.lambda_min_nm", self.dispersion.lambda_min_nm)?;
        if !(self.dispersion.lambda_max_nm > self.dispersion.lambda_min_nm) {
            return Err(Error::Config(
                "dispersion.lambda_max_nm must exceed lambda_min_nm".into(),
            ));
        }
        if self.dispersion.samples < crate::dispersion::MIN_TABLE_SAMPLES {
            return Err(Error::Config(format!(
                "dispersion.samples must be at least {}",
                crate::dispersion::MIN_TABLE_SAMPLES
            )));
        }
        positive("jsa.half_span_thz", self.jsa.half_span_thz)?;
        if self.jsa.samples < 3 || self.jsa.samples.is_multiple_of(2) {
            return Err(Error::Config(
                "jsa.samples must be odd and at least 3".into(),
            ));
        }
        positive("channels.spacing_ghz", self.channels.spacing_ghz)?;
        positive("channels.bandwidth_ghz", self.channels.bandwidth_ghz)?;
        if !self.nonlinear.chi2_pm_per_v.is_finite() || self.nonlinear.chi2_pm_per_v < 0.0 {
            return Err(Error::Config("nonlinear.chi2_pm_per_v must be >= 0".into()));
        }
        let o = &self.optimizer;
        if o.population < 8 {
            return Err(Error::Config(
                "optimizer.population must be at least 8".into(),
            ));
        }
        if o.generations < 1 {
            return Err(Error::Config(
                "optimizer.generations must be at least 1".into(),
            ));
        }
        if o.elite_count >= o.population || o.tournament_size < 1 {
            return Err(Error::Config(
                "optimizer.elite_count must be below population and tournament_size >= 1".into(),
            ));
        }
        for (name, r) in [
            ("crossover_rate", o.crossover_rate),
            ("mutation_rate", o.mutation_rate),
        ] {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::Config(format!(
                    "optimizer.{name} must lie in [0, 1]"
                )));
            }
        }
        if let Some(b) = &o.bounds {
            for [lo, hi] in b.as_array() {
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return Err(Error::Config(format!(
                        "optimizer bounds must be finite with lower < upper, got [{lo}, {hi}]"
                    )));
                }
            }
        }
        crate::spdc::StackParameter::parse(&self.sensitivity.parameter)?;
        Ok(())
    }

    pub fn material_model(&self) -> Result<MaterialModel> {
        MaterialModel::new(self.material.temperature_k)
    }

    pub fn fiber_mode(&self) -> Result<FiberMode> {
        FiberMode::new(
            self.fiber.mode_field_diameter_um,
            self.fiber.center_wavelength_um,
        )
    }

    pub fn gene_bounds(&self) -> GeneBounds {
        self.optimizer
            .bounds
            .clone()
            .unwrap_or_else(|| GeneBounds::around(&self.stack, 0.15))
    }
}
