//! Simulation of type-II parametric down-conversion in AlGaAs Bragg
//! reflection waveguides, from the layer stack to per-channel
//! entanglement figures and design optimization.

pub mod config;
pub mod consts;
pub mod dispersion;
pub mod error;
pub mod materials;
pub mod modesolver;
pub mod optimizer;
pub mod output;
pub mod pipeline;
pub mod profile;
pub mod roots;
pub mod spdc;
pub mod spline;
pub mod wdm;

pub use error::{Error, Result};
