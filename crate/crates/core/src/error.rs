use thiserror::Error;

/// Errors raised anywhere in the simulation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// An input parameter is outside the domain of a model.
    #[error("{parameter} = {value} is out of domain: {reason}")]
    Domain {
        parameter: &'static str,
        value: f64,
        reason: String,
    },

    /// The photonic-bandgap search found no confined mode.
    #[error("no bandgap-confined {polarization} mode at {wavelength_um} um")]
    NoBandgapMode {
        polarization: &'static str,
        wavelength_um: f64,
    },

    /// A total-internal-reflection mode was required but none exists.
    #[error("no guided {polarization} TIR mode at {wavelength_um} um")]
    ModeNotFound {
        polarization: &'static str,
        wavelength_um: f64,
    },

    /// A caller violated a documented precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A WDM channel band does not fit inside the sampled spectrum.
    #[error("channel {channel} lies outside the sampled detuning grid")]
    ChannelOutOfRange { channel: usize },

    /// A spectral quantity was requested from a grid that clips it.
    #[error("spectrum clipped by the sampling grid: {0}")]
    Clipped(String),

    /// The optimizer could not find any feasible starting design.
    #[error("no feasible design found in the search space after {attempts} sampling rounds")]
    InfeasibleSpace { attempts: usize },

    /// The phase-matching search did not bracket a root.
    #[error("no degenerate phase-matching point within {window_nm} nm of {center_nm} nm")]
    NoPhaseMatch { center_nm: f64, window_nm: f64 },

    /// Configuration could not be parsed or validated.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Configuration and validation failures, as opposed to numerical ones.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_) | Error::Io(_))
    }

    pub(crate) fn domain(parameter: &'static str, value: f64, reason: impl Into<String>) -> Self {
        Error::Domain {
            parameter,
            value,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
