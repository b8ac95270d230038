//! Physical constants (CODATA 2018, SI).

/// Speed of light in vacuum, m/s.
pub const C: f64 = 299_792_458.0;
/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permittivity, F/m.
pub const EPS0: f64 = 8.854_187_812_8e-12;
/// h c in eV um, for photon energy from vacuum wavelength.
pub const HC_EV_UM: f64 = 1.239_841_984_332_002_6;

/// Angular frequency (rad/s) of a vacuum wavelength in micrometres.
pub fn omega_from_um(wavelength_um: f64) -> f64 {
    2.0 * std::f64::consts::PI * C / (wavelength_um * 1e-6)
}

/// Vacuum wavelength in micrometres of an angular frequency (rad/s).
pub fn um_from_omega(omega: f64) -> f64 {
    2.0 * std::f64::consts::PI * C / omega * 1e6
}

/// Converts a frequency in GHz to angular frequency in rad/s.
pub fn omega_from_ghz(ghz: f64) -> f64 {
    2.0 * std::f64::consts::PI * ghz * 1e9
}
