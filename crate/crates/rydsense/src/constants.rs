//! Physical constants (CODATA 2018) and cesium data used throughout.
//!
//! All rates inside the library are angular frequencies in rad/s. Quantities
//! quoted in ordinary frequency (Hz, kHz, MHz) are converted with `TAU` at
//! module boundaries.

pub use std::f64::consts::TAU;

/// Boltzmann constant, J/K.
pub const KB: f64 = 1.380649e-23;
/// Planck constant, J s.
pub const PLANCK: f64 = 6.62607015e-34;
/// Reduced Planck constant, J s.
pub const HBAR: f64 = PLANCK / TAU;
/// Elementary charge, C.
pub const E_CHARGE: f64 = 1.602176634e-19;
/// Bohr radius, m.
pub const BOHR_RADIUS: f64 = 5.29177210903e-11;
/// Vacuum permittivity, F/m.
pub const EPS0: f64 = 8.8541878128e-12;
/// Speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299792458.0;
/// Atomic mass unit, kg.
pub const AMU: f64 = 1.66053906660e-27;
/// Atomic unit of dipole moment e*a0, C m.
pub const EA0: f64 = E_CHARGE * BOHR_RADIUS;
/// Atomic unit of velocity, m/s.
pub const ATOMIC_VELOCITY: f64 = 2.18769126364e6;
/// Atomic unit of time, s.
pub const ATOMIC_TIME: f64 = 2.4188843265857e-17;

/// Mass of Cs-133, kg.
pub const CS_MASS: f64 = 132.905451961 * AMU;
/// Melting point of cesium, K (solid/liquid branch switch of the vapor
/// pressure correlation).
pub const CS_MELTING_POINT: f64 = 301.59;

// Cs 6S1/2(F=4) <-> 6P3/2(F'=5) <-> 52D5/2 <-> 53P3/2 ladder.

/// Probe transition wavelength 6S1/2 -> 6P3/2, m.
pub const CS_PROBE_WAVELENGTH: f64 = 852.347e-9;
/// Coupling transition wavelength 6P3/2 -> 52D5/2, m.
pub const CS_COUPLING_WAVELENGTH: f64 = 509.44e-9;
/// RF transition frequency 52D5/2 <-> 53P3/2, Hz.
pub const CS_RF_FREQUENCY: f64 = 5.047e9;
/// 6P3/2 population decay rate, rad/s.
pub const CS_GAMMA_6P32: f64 = TAU * 5.2e6;
/// 52D5/2 population decay rate (spontaneous + blackbody), rad/s.
pub const CS_GAMMA_52D52: f64 = TAU * 3.4e3;
/// 53P3/2 population decay rate (spontaneous + blackbody), rad/s.
pub const CS_GAMMA_53P32: f64 = TAU * 1.6e3;
/// RF transition dipole moment 52D5/2 <-> 53P3/2, C m.
pub const CS_RF_DIPOLE: f64 = 1745.0 * EA0;

// Cs 6S1/2 <-> 6P1/2 <-> 9S1/2 <-> 53P3/2 three-photon ladder (RF to 52D5/2).

/// 6S1/2 -> 6P1/2 (D1) wavelength, m.
pub const CS_D1_WAVELENGTH: f64 = 894.593e-9;
/// 6P1/2 -> 9S1/2 wavelength, m.
pub const CS_6P12_9S12_WAVELENGTH: f64 = 635.63e-9;
/// 9S1/2 -> 53P3/2 wavelength, m.
pub const CS_9S12_53P32_WAVELENGTH: f64 = 2246.7e-9;
/// 6P1/2 population decay rate, rad/s.
pub const CS_GAMMA_6P12: f64 = TAU * 4.56e6;
/// 9S1/2 population decay rate, rad/s.
pub const CS_GAMMA_9S12: f64 = TAU * 0.73e6;
