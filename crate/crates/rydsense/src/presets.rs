//! Built-in level schemes for the Cs systems studied here.

use crate::constants::*;
use crate::scheme::{Coupling, LadderScheme, Level};

/// Bare two-level system on the Cs D2 line (probe only).
pub fn two_level(rabi: f64, detuning: f64, gamma: f64) -> LadderScheme {
    LadderScheme::new(
        vec![Level::new("6S1/2", 0.0), Level::new("6P3/2", gamma)],
        vec![Coupling::optical(0, 1, rabi, detuning, TAU / 852e-9)],
        0,
    )
    .expect("two-level preset is valid")
}

/// Cs EIT ladder 6S1/2 -> 6P3/2 -> 52D5/2 with counterpropagating coupling.
pub fn three_level_eit(
    probe_rabi: f64,
    coupling_rabi: f64,
    probe_detuning: f64,
    coupling_detuning: f64,
) -> LadderScheme {
    LadderScheme::new(
        vec![
            Level::new("6S1/2", 0.0),
            Level::new("6P3/2", CS_GAMMA_6P32),
            Level::rydberg("52D5/2", CS_GAMMA_52D52),
        ],
        vec![
            Coupling::optical(0, 1, probe_rabi, probe_detuning, TAU / CS_PROBE_WAVELENGTH),
            Coupling::optical(
                1,
                2,
                coupling_rabi,
                coupling_detuning,
                -TAU / CS_COUPLING_WAVELENGTH,
            ),
        ],
        0,
    )
    .expect("three-level preset is valid")
}

/// The four-level RF sensing system: the EIT ladder plus the 52D5/2 <-> 53P3/2
/// RF coupling (Doppler free).
pub fn cs_four_level(
    probe_rabi: f64,
    coupling_rabi: f64,
    rf_rabi: f64,
    probe_detuning: f64,
    coupling_detuning: f64,
    rf_detuning: f64,
) -> LadderScheme {
    LadderScheme::new(
        vec![
            Level::new("6S1/2", 0.0),
            Level::new("6P3/2", CS_GAMMA_6P32),
            Level::rydberg("52D5/2", CS_GAMMA_52D52),
            Level::rydberg("53P3/2", CS_GAMMA_53P32),
        ],
        vec![
            Coupling::optical(0, 1, probe_rabi, probe_detuning, TAU / CS_PROBE_WAVELENGTH),
            Coupling::optical(
                1,
                2,
                coupling_rabi,
                coupling_detuning,
                -TAU / CS_COUPLING_WAVELENGTH,
            ),
            Coupling::rf(2, 3, rf_rabi, rf_detuning),
        ],
        0,
    )
    .expect("four-level preset is valid")
}

/// Three-photon readout system 6S1/2 -> 6P1/2 -> 9S1/2 -> 53P3/2 with the RF
/// field on 53P3/2 <-> 52D5/2. The s laser counterpropagates the probe and the
/// c laser copropagates, which nearly cancels the three-photon wavevector.
#[allow(clippy::too_many_arguments)]
pub fn cs_three_photon(
    probe_rabi: f64,
    second_rabi: f64,
    coupling_rabi: f64,
    rf_rabi: f64,
    probe_detuning: f64,
    second_detuning: f64,
    coupling_detuning: f64,
    rf_detuning: f64,
) -> LadderScheme {
    LadderScheme::new(
        vec![
            Level::new("6S1/2", 0.0),
            Level::new("6P1/2", CS_GAMMA_6P12),
            Level::new("9S1/2", CS_GAMMA_9S12),
            Level::rydberg("53P3/2", CS_GAMMA_53P32),
            Level::rydberg("52D5/2", CS_GAMMA_52D52),
        ],
        vec![
            Coupling::optical(0, 1, probe_rabi, probe_detuning, TAU / CS_D1_WAVELENGTH),
            Coupling::optical(
                1,
                2,
                second_rabi,
                second_detuning,
                -TAU / CS_6P12_9S12_WAVELENGTH,
            ),
            Coupling::optical(
                2,
                3,
                coupling_rabi,
                coupling_detuning,
                TAU / CS_9S12_53P32_WAVELENGTH,
            ),
            Coupling::rf(3, 4, rf_rabi, rf_detuning),
        ],
        0,
    )
    .expect("three-photon preset is valid")
}
