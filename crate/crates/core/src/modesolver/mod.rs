//! Guided modes of the layered ridge waveguide.
//!
//! The vertical problem is a 1-D transfer-matrix solve with the reflectors
//! treated as semi-infinite periodic claddings. Total-internal-reflection
//! (TIR) modes sit where the cladding period is evanescent-like
//! (trace > 2); Bragg modes sit inside a photonic bandgap (trace < -2).
//! The ridge is then reduced to a lateral symmetric slab by the
//! effective-index method.

mod lateral;
pub mod transfer;
mod vertical;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::materials::MaterialModel;
use crate::profile::{Grid1d, Profile1d, SeparableProfile};

pub use lateral::{effective_index_lateral, LateralSolution};
pub use transfer::{layer_matrix, period_trace, Matrix2};
pub use vertical::{find_roots, residual, sample_half_profile, RootSearch, SlabRoot};

/// Number of uniformly spaced n_eff samples scanned for sign changes.
pub const SCAN_POINTS: usize = 2000;
/// Bisection stops when the n_eff bracket is narrower than this.
pub const ROOT_TOLERANCE: f64 = 1e-13;
/// Maximum normalized residual for an accepted root.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

/// Vertical profile grid: 1 nm spacing over +/- 15 um.
pub const VERTICAL_STEP_UM: f64 = 0.001;
pub const VERTICAL_HALF_WIDTH_UM: f64 = 15.0;
/// Lateral profile grid: 10 nm spacing over +/- 20 um.
pub const LATERAL_STEP_UM: f64 = 0.01;
pub const LATERAL_HALF_WIDTH_UM: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Polarization {
    Te,
    Tm,
}

impl Polarization {
    pub fn name(self) -> &'static str {
        match self {
            Polarization::Te => "TE",
            Polarization::Tm => "TM",
        }
    }

    /// Lateral boundary conditions are those of the other polarization.
    pub fn swapped(self) -> Self {
        match self {
            Polarization::Te => Polarization::Tm,
            Polarization::Tm => Polarization::Te,
        }
    }
}

impl std::fmt::Display for Polarization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeClass {
    Tir,
    Bragg,
}

impl ModeClass {
    pub fn name(self) -> &'static str {
        match self {
            ModeClass::Tir => "TIR",
            ModeClass::Bragg => "Bragg",
        }
    }
}

/// Symmetry of the vertical field about the core centre.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

/// A homogeneous layer described by its refractive index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexLayer {
    pub index: f64,
    pub thickness_um: f64,
}

impl IndexLayer {
    pub fn new(index: f64, thickness_um: f64) -> Self {
        Self {
            index,
            thickness_um,
        }
    }
}

/// One AlGaAs layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Layer {
    pub al_fraction: f64,
    pub thickness_nm: f64,
}

impl Layer {
    pub fn new(al_fraction: f64, thickness_nm: f64) -> Self {
        Self {
            al_fraction,
            thickness_nm,
        }
    }

    pub fn thickness_um(&self) -> f64 {
        self.thickness_nm * 1e-3
    }
}

/// Core plus two identical Bragg reflectors, one above and one below.
///
/// `reflector` lists the two layers of one period starting from the layer
/// that touches the core.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerStack {
    pub core: Layer,
    pub reflector: [Layer; 2],
    pub bilayers_per_side: usize,
    pub ridge_width_nm: f64,
    pub length_mm: f64,
}

impl LayerStack {
    /// The reference design: 370 nm Al0.7 core, 127 nm Al0.4 / 309 nm Al0.9
    /// bilayers, 8 per side, 1.77 um ridge, 1 mm long.
    pub fn reference() -> Self {
        Self {
            core: Layer::new(0.7, 370.0),
            reflector: [Layer::new(0.4, 127.0), Layer::new(0.9, 309.0)],
            bilayers_per_side: 8,
            ridge_width_nm: 1770.0,
            length_mm: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, layer) in [
            ("core", &self.core),
            ("reflector[0]", &self.reflector[0]),
            ("reflector[1]", &self.reflector[1]),
        ] {
            if !(layer.thickness_nm > 0.0) || !layer.thickness_nm.is_finite() {
                return Err(Error::domain(
                    "thickness_nm",
                    layer.thickness_nm,
                    format!("{name} thickness must be positive"),
                ));
            }
            if !(0.0..=1.0).contains(&layer.al_fraction) {
                return Err(Error::domain(
                    "al_fraction",
                    layer.al_fraction,
                    format!("{name} aluminium fraction must lie in [0, 1]"),
                ));
            }
        }
        if self.bilayers_per_side < 1 {
            return Err(Error::domain(
                "bilayers_per_side",
                self.bilayers_per_side as f64,
                "need at least one bilayer per side",
            ));
        }
        if !(self.ridge_width_nm > 0.0) || !self.ridge_width_nm.is_finite() {
            return Err(Error::domain(
                "ridge_width_nm",
                self.ridge_width_nm,
                "ridge width must be positive",
            ));
        }
        if !(self.length_mm > 0.0) || !self.length_mm.is_finite() {
            return Err(Error::domain(
                "length_mm",
                self.length_mm,
                "waveguide length must be positive",
            ));
        }
        Ok(())
    }

    /// Full layer sequence from top to bottom.
    pub fn layers(&self) -> Vec<Layer> {
        let mut upper: Vec<Layer> = (0..self.bilayers_per_side)
            .flat_map(|_| self.reflector)
            .collect();
        let lower = upper.clone();
        upper.reverse();
        upper.push(self.core);
        upper.extend(lower);
        upper
    }

    /// Index of the core in [`LayerStack::layers`].
    pub fn core_position(&self) -> usize {
        2 * self.bilayers_per_side
    }

    pub fn length_m(&self) -> f64 {
        self.length_mm * 1e-3
    }

    pub fn ridge_width_um(&self) -> f64 {
        self.ridge_width_nm * 1e-3
    }

    pub fn period_um(&self) -> f64 {
        self.reflector[0].thickness_um() + self.reflector[1].thickness_um()
    }
}

/// A solved vertical mode with its sampled, normalized profile.
///
/// For TE the profile is `E_x(y)`; for TM it is `H_x(y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GuidedMode {
    pub polarization: Polarization,
    pub class: ModeClass,
    pub n_eff: f64,
    pub wavelength_um: f64,
    pub parity: Parity,
    /// Decaying Bloch eigenvalue of the cladding period (field ratio per period).
    pub bloch_eigenvalue: f64,
    pub residual: f64,
    pub profile: Profile1d,
}

impl GuidedMode {
    pub fn spacing_nm(&self) -> f64 {
        self.profile.grid().step() * 1e3
    }
}

/// Transfer-matrix mode solver bound to a stack and a material model.
#[derive(Debug, Clone)]
pub struct ModeSolver {
    material: MaterialModel,
    stack: LayerStack,
    lateral_contrast: f64,
}

/// Layer indices of the stack at one wavelength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StackIndices {
    pub core: IndexLayer,
    pub period: [IndexLayer; 2],
}

impl StackIndices {
    pub fn min_index(&self) -> f64 {
        self.core
            .index
            .min(self.period[0].index)
            .min(self.period[1].index)
    }

    pub fn max_index(&self) -> f64 {
        self.core
            .index
            .max(self.period[0].index)
            .max(self.period[1].index)
    }
}

impl ModeSolver {
    /// `lateral_contrast` is the index step `δn` between the ridge and the
    /// unetched region in the effective-index reduction.
    pub fn new(material: MaterialModel, stack: LayerStack, lateral_contrast: f64) -> Result<Self> {
        stack.validate()?;
        if !lateral_contrast.is_finite() {
            return Err(Error::domain(
                "lateral_contrast",
                lateral_contrast,
                "must be finite",
            ));
        }
        Ok(Self {
            material,
            stack,
            lateral_contrast,
        })
    }

    pub fn stack(&self) -> &LayerStack {
        &self.stack
    }

    pub fn material(&self) -> &MaterialModel {
        &self.material
    }

    pub fn lateral_contrast(&self) -> f64 {
        self.lateral_contrast
    }

    pub fn indices(&self, wavelength_um: f64) -> Result<StackIndices> {
        let layer = |l: &Layer| -> Result<IndexLayer> {
            Ok(IndexLayer::new(
                self.material
                    .refractive_index(l.al_fraction, wavelength_um)?,
                l.thickness_um(),
            ))
        };
        Ok(StackIndices {
            core: layer(&self.stack.core)?,
            period: [
                layer(&self.stack.reflector[0])?,
                layer(&self.stack.reflector[1])?,
            ],
        })
    }

    fn search(
        &self,
        wavelength_um: f64,
        pol: Polarization,
        class: ModeClass,
    ) -> Result<(StackIndices, Vec<SlabRoot>)> {
        let idx = self.indices(wavelength_um)?;
        let search = RootSearch::for_class(&idx, class);
        let roots = find_roots(idx.core, &idx.period, wavelength_um, pol, &search);
        Ok((idx, roots))
    }

    /// Vertical TIR roots without profiles, sorted by descending n_eff.
    pub fn tir_roots(&self, wavelength_um: f64, pol: Polarization) -> Result<Vec<SlabRoot>> {
        Ok(self.search(wavelength_um, pol, ModeClass::Tir)?.1)
    }

    /// Lowest-order vertical Bragg root without its profile.
    pub fn bragg_root(&self, wavelength_um: f64, pol: Polarization) -> Result<SlabRoot> {
        self.search(wavelength_um, pol, ModeClass::Bragg)?
            .1
            .into_iter()
            .next()
            .ok_or(Error::NoBandgapMode {
                polarization: pol.name(),
                wavelength_um,
            })
    }

    /// Fundamental vertical root of the requested class.
    pub fn fundamental_root(
        &self,
        wavelength_um: f64,
        pol: Polarization,
        class: ModeClass,
    ) -> Result<SlabRoot> {
        match class {
            ModeClass::Bragg => self.bragg_root(wavelength_um, pol),
            ModeClass::Tir => self
                .tir_roots(wavelength_um, pol)?
                .into_iter()
                .next()
                .ok_or(Error::ModeNotFound {
                    polarization: pol.name(),
                    wavelength_um,
                }),
        }
    }

    /// All guided TIR modes, sorted by descending n_eff. Empty if none.
    pub fn find_tir_modes(&self, wavelength_um: f64, pol: Polarization) -> Result<Vec<GuidedMode>> {
        let (idx, roots) = self.search(wavelength_um, pol, ModeClass::Tir)?;
        roots
            .into_iter()
            .map(|r| vertical::build_mode(&idx, r, wavelength_um, pol, ModeClass::Tir))
            .collect()
    }

    /// The highest-index mode confined by the reflector bandgap.
    pub fn find_bragg_mode(&self, wavelength_um: f64, pol: Polarization) -> Result<GuidedMode> {
        let idx = self.indices(wavelength_um)?;
        let root = self.bragg_root(wavelength_um, pol)?;
        vertical::build_mode(&idx, root, wavelength_um, pol, ModeClass::Bragg)
    }

    /// Fundamental mode of the requested class with its vertical profile.
    pub fn find_mode(
        &self,
        wavelength_um: f64,
        pol: Polarization,
        class: ModeClass,
    ) -> Result<GuidedMode> {
        let idx = self.indices(wavelength_um)?;
        let root = self.fundamental_root(wavelength_um, pol, class)?;
        vertical::build_mode(&idx, root, wavelength_um, pol, class)
    }

    /// Effective-index reduction of the ridge for a vertical index `n_vertical`.
    pub fn lateral(
        &self,
        n_vertical: f64,
        wavelength_um: f64,
        pol: Polarization,
    ) -> LateralSolution {
        effective_index_lateral(
            n_vertical,
            self.lateral_contrast,
            self.stack.ridge_width_um(),
            wavelength_um,
            pol.swapped(),
        )
    }

    /// 2-D effective index of the fundamental mode of a given class.
    pub fn effective_index_2d(
        &self,
        wavelength_um: f64,
        pol: Polarization,
        class: ModeClass,
    ) -> Result<f64> {
        let root = self.fundamental_root(wavelength_um, pol, class)?;
        Ok(self.lateral(root.n_eff, wavelength_um, pol).n_eff)
    }

    /// Separable, normalized 2-D profile `X(x) Y(y)` of a solved mode.
    pub fn mode_profile_2d(
        &self,
        mode: &GuidedMode,
        lateral: &LateralSolution,
    ) -> Result<SeparableProfile> {
        let grid = Grid1d::symmetric(LATERAL_HALF_WIDTH_UM, LATERAL_STEP_UM)?;
        SeparableProfile::new(lateral.profile(grid)?, mode.profile.clone()).normalized()
    }
}
