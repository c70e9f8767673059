//! Quantitative anchors and invariants beyond the acceptance gate: the
//! room-temperature EIT linewidth, the Doppler-averaged optical depth band,
//! velocity-quadrature convergence, lineshape symmetries, and the
//! interferometer model reductions.

use num_complex::Complex64;

use rydsense::budget::DephasingBudget;
use rydsense::constants::*;
use rydsense::dephasing::{self, BudgetOverrides, GasParams};
use rydsense::mzi::{self, InterferometerConfig, NoiseBudget};
use rydsense::presets;
use rydsense::scenario::{self, ScenarioConfig, ScenarioKind};
use rydsense::sensing::{self, RfTransition};
use rydsense::solver;
use rydsense::spectroscopy::{self, CellConditions};
use rydsense::velocity::{make_velocity_grid, VelocityGrid};

fn grid_hz(span_hz: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| TAU * (-span_hz + 2.0 * span_hz * i as f64 / (n - 1) as f64))
        .collect()
}

fn fig2_budget() -> DephasingBudget {
    scenario::fig3_reference_budget()
}

/// Room-temperature EIT peak FWHM ~1.7 MHz at the Fig. 2 Rabi frequencies
/// (quoted tolerance +-30%), on the Doppler-averaged transmission trace.
#[test]
fn eit_fwhm_room_temperature_anchor() {
    let scheme = presets::three_level_eit(TAU * 1.8e6, TAU * 0.5e6, 0.0, 0.0);
    let grid = make_velocity_grid(294.0, CS_MASS, 2001, 4.0).unwrap();
    let detunings = grid_hz(6e6, 241);
    let trace = spectroscopy::doppler_averaged_trace(
        &scheme,
        &fig2_budget(),
        &CellConditions::default(),
        &grid,
        &detunings,
    )
    .unwrap();
    let width = spectroscopy::fwhm(&trace).unwrap();
    assert!(
        (width - 1.7e6).abs() / 1.7e6 < 0.30,
        "EIT FWHM {:.3} MHz outside 1.7 MHz +-30%",
        width / 1e6
    );
}

/// The same ~1.7 MHz band holds for the lock-in lineshape the fig4a scenario
/// analyzes at room-temperature density.
#[test]
fn fig4a_lineshape_room_temperature_anchor() {
    let mut config = ScenarioConfig::preset(ScenarioKind::Fig4aFwhmVsDensity);
    config.densities_per_cm3 = Some(vec![3.1e10]);
    config.numerics.velocity_points = Some(2001);
    let out = scenario::run_scenario(&config).unwrap();
    let width_mhz = out.tables[0].rows[0][2];
    assert!(
        (width_mhz - 1.7).abs() / 1.7 < 0.30,
        "lock-in FWHM {width_mhz:.3} MHz outside 1.7 MHz +-30%"
    );
}

/// Two-level weak-probe Doppler-averaged optical depth over the 4 cm cell at
/// room temperature: the independent Voigt quadrature gives OD = 8.68; the
/// solver must agree within 2% and sit inside the 1-10 sanity band.
#[test]
fn doppler_averaged_optical_depth_band() {
    let lambda = 852e-9;
    let gamma = TAU * 5.2e6;
    let density = 3.1e16;
    let length = 0.04;

    // Independent oracle: alpha = N sigma0 Int f(v) L(k v) dv.
    let sigma = (KB * 294.0 / CS_MASS).sqrt();
    let k = TAU / lambda;
    let sigma0 = 3.0 * lambda * lambda / TAU;
    let n_nodes = 200001;
    let span = 6.0 * sigma;
    let mut integral = 0.0;
    for i in 0..n_nodes {
        let v = -span + 2.0 * span * i as f64 / (n_nodes - 1) as f64;
        let f = (-v * v / (2.0 * sigma * sigma)).exp() / ((TAU).sqrt() * sigma);
        let lorentz = (gamma / 2.0).powi(2) / ((k * v).powi(2) + (gamma / 2.0).powi(2));
        let w = if i == 0 || i == n_nodes - 1 { 0.5 } else { 1.0 };
        integral += w * f * lorentz;
    }
    integral *= 2.0 * span / (n_nodes - 1) as f64;
    let oracle_od = density * sigma0 * integral * length;

    // Solver path: weak probe, natural dipole, trapezoid velocity average.
    let scheme = presets::two_level(TAU * 1e3, 0.0, gamma);
    let grid = make_velocity_grid(294.0, CS_MASS, 4001, 4.5).unwrap();
    let relax = solver::build_relaxation(&scheme, &DephasingBudget::zero()).unwrap();
    let dipole = solver::natural_dipole(lambda, gamma);
    let (alpha, _) =
        spectroscopy::averaged_response(&scheme, &relax, &grid, density, dipole, 0.0).unwrap();
    let od = alpha * length;

    assert!(
        (od - oracle_od).abs() / oracle_od < 0.02,
        "solver OD {od:.3} vs oracle {oracle_od:.3}"
    );
    assert!(
        (1.0..=10.0).contains(&od),
        "OD {od:.2} outside the 1-10 band"
    );
}

/// Quadrature convergence: doubling velocity points moves the reported
/// transmission by far less than 1e-4 at the scenario default (4001, span 4).
#[test]
fn velocity_quadrature_convergence() {
    let scheme = presets::three_level_eit(TAU * 1.8e6, TAU * 0.5e6, 0.0, 0.0);
    let cond = CellConditions::default();
    let detunings = vec![-TAU * 1e6, 0.0, TAU * 1e6];
    let run = |points: usize| {
        let grid = make_velocity_grid(294.0, CS_MASS, points, 4.0).unwrap();
        spectroscopy::doppler_averaged_trace(&scheme, &fig2_budget(), &cond, &grid, &detunings)
            .unwrap()
            .transmission
    };
    let base = run(4001);
    let fine = run(8001);
    for (b, f) in base.iter().zip(&fine) {
        assert!((b - f).abs() < 1e-4, "transmission moved {b} -> {f}");
    }
}

/// AT splitting from v = 0 traces is even in the sign of the RF detuning and
/// stable under probe-grid refinement.
#[test]
fn at_splitting_even_in_rf_detuning() {
    let transition = RfTransition::cs_52d52_53p32();
    let field = sensing::at_splitting_to_field(3e6, &transition).unwrap();
    let rabi = sensing::rabi_for_field(field, &transition);
    let split_at = |rf_detuning: f64, points: usize| {
        let scheme = presets::cs_four_level(TAU * 0.3e6, TAU * 0.3e6, rabi, 0.0, 0.0, rf_detuning);
        let trace = spectroscopy::doppler_averaged_trace(
            &scheme,
            &DephasingBudget::zero(),
            &CellConditions::default(),
            &VelocityGrid::single(0.0),
            &grid_hz(4e6, points),
        )
        .unwrap();
        spectroscopy::find_at_peaks(&trace).unwrap().2
    };
    let plus = split_at(TAU * 0.5e6, 1601);
    let minus = split_at(-TAU * 0.5e6, 1601);
    assert!(
        (plus - minus).abs() / plus < 1e-6,
        "splitting not even in RF detuning: {plus} vs {minus}"
    );
    let refined = split_at(TAU * 0.5e6, 3201);
    assert!(
        (refined - plus).abs() / plus < 0.005,
        "splitting moved under refinement: {plus} vs {refined}"
    );
}

/// Residual two-photon Doppler width ratio: |k_852 - k_509| sigma_v against
/// the one-photon scale, pure wavevector arithmetic.
#[test]
fn residual_doppler_scaling() {
    let kp: f64 = 1.0 / 852e-9;
    let kc: f64 = 1.0 / 509e-9;
    let ratio = (kp - kc).abs() / kc;
    assert!((ratio - 0.40).abs() < 0.01, "residual ratio {ratio}");
}

/// Weak-field response magnitudes grow monotonically with field where the
/// model scan fixed the property: over the full 0-1 mV/cm range for the
/// weak-probe preset, and over the small-field range for the broadened one.
#[test]
fn weak_field_monotonicity() {
    let grid = make_velocity_grid(294.0, CS_MASS, 1501, 4.0).unwrap();
    let transition = RfTransition::cs_52d52_53p32();
    let conditions = CellConditions::default();
    let budget = scenario::fig3_reference_budget();

    let fields: Vec<f64> = (0..11).map(|i| 0.1 * i as f64 / 10.0).collect();
    let weak = presets::cs_four_level(TAU * 0.5e6, TAU * 2.7e6, 0.0, 0.0, 0.0, 0.0);
    let curve = sensing::weak_field_curve(&weak, &budget, &conditions, &grid, &transition, &fields)
        .unwrap();
    for pair in curve.windows(2) {
        assert!(
            pair[1].delta_t_percent.abs() >= pair[0].delta_t_percent.abs(),
            "weak-probe |dT| not monotone at {} V/m",
            pair[1].field
        );
    }

    let small: Vec<f64> = (0..6).map(|i| 0.02 * i as f64 / 5.0).collect();
    let broad = presets::cs_four_level(TAU * 3.0e6, TAU * 3.3e6, 0.0, 0.0, 0.0, 0.0);
    let curve = sensing::weak_field_curve(&broad, &budget, &conditions, &grid, &transition, &small)
        .unwrap();
    for pair in curve.windows(2) {
        assert!(
            pair[1].delta_t_percent.abs() >= pair[0].delta_t_percent.abs(),
            "broadened |dT| not monotone at {} V/m",
            pair[1].field
        );
    }
}

/// With photon shot noise only, both SNRs reduce to the closed-form
/// photon-counting expressions within 1%. A synthetic flat-plus-bump trace
/// makes every term hand computable.
#[test]
fn mzi_shot_noise_model_reduction() {
    let n = 201;
    let detunings: Vec<f64> = (0..n)
        .map(|i| TAU * (-1e6 + 2e6 * i as f64 / 200.0))
        .collect();
    let t_base = 0.25;
    let t_peak = 0.36;
    let transmission: Vec<f64> = detunings
        .iter()
        .map(|&d| {
            let s = TAU * 0.1e6;
            t_base + (t_peak - t_base) * (-d * d / (2.0 * s * s)).exp()
        })
        .collect();
    let trace = spectroscopy::SpectralTrace {
        detunings,
        transmission,
        phase: vec![0.0; n],
        metadata: serde_json::Value::Null,
    };
    let config = InterferometerConfig {
        path_phase: 0.0, // amplitude quadrature; phase channel is flat here
        ..Default::default()
    };
    let noise = NoiseBudget {
        probe_relative_intensity_noise: 0.0,
        detector_nep: 0.0,
        ..Default::default()
    };
    let comparison = mzi::snr_comparison(&trace, &config, &noise).unwrap();

    let p = config.input_power;
    let eta = noise.quantum_efficiency;
    let h_nu = PLANCK * SPEED_OF_LIGHT / config.wavelength;
    let r = config.lo_signal_ratio;
    // Direct: signal P (T_peak - T_base), shot noise on P T_base.
    let direct_closed = p * (t_peak - t_base) / (2.0 * h_nu * p * t_base / eta).sqrt();
    // MZI at the amplitude quadrature: D = 2 sqrt(R) |t|, shot on (R + T) P.
    let mzi_closed = p * 2.0 * r.sqrt() * (t_peak.sqrt() - t_base.sqrt())
        / (2.0 * h_nu * p * (r + t_base) / eta).sqrt();
    assert!(
        (comparison.snr_direct - direct_closed).abs() / direct_closed < 0.01,
        "direct {} vs closed form {direct_closed}",
        comparison.snr_direct
    );
    assert!(
        (comparison.snr_mzi - mzi_closed).abs() / mzi_closed < 0.01,
        "MZI {} vs closed form {mzi_closed}",
        comparison.snr_mzi
    );
}

/// Shot-noise-only enhancement follows the sqrt(R) trend while the LO is
/// weaker than the transmitted signal, the analytic small-R limit.
#[test]
fn mzi_enhancement_sqrt_r_trend() {
    let scheme = presets::three_level_eit(TAU * 1.8e6, TAU * 0.5e6, 0.0, 0.0);
    let grid = make_velocity_grid(294.0, CS_MASS, 1001, 4.0).unwrap();
    let trace = spectroscopy::doppler_averaged_trace(
        &scheme,
        &fig2_budget(),
        &CellConditions::default(),
        &grid,
        &grid_hz(8e6, 161),
    )
    .unwrap();
    let noise = NoiseBudget {
        probe_relative_intensity_noise: 0.0,
        detector_nep: 0.0,
        ..Default::default()
    };
    // T_base ~ 4e-4, so R = 1e-5 and 4e-5 are both well below it.
    let enh = |r: f64| {
        let config = InterferometerConfig {
            lo_signal_ratio: r,
            phase_stability_rms: 0.0,
            ..Default::default()
        };
        mzi::snr_comparison(&trace, &config, &noise)
            .unwrap()
            .enhancement
    };
    let e1 = enh(1e-5);
    let e4 = enh(4e-5);
    assert!(
        (e4 / e1 - 2.0).abs() < 0.1,
        "enhancement ratio {} not ~2 for 4x LO power",
        e4 / e1
    );
}

/// SensitivityReport serializes with the documented keys.
#[test]
fn sensitivity_report_serialization() {
    let report = sensing::SensitivityReport {
        slope_at_zero: -31.0,
        min_detectable_field: 4.7e-4,
        atom_shot_limit: 9.0e-7,
        photon_snr: 3.27e6,
        config: serde_json::json!({"operating_point": "fig4b 294 K"}),
    };
    let json = serde_json::to_value(&report).unwrap();
    for key in [
        "slope_at_zero",
        "min_detectable_field",
        "atom_shot_limit",
        "photon_snr",
        "config",
    ] {
        assert!(json.get(key).is_some(), "missing key {key}");
    }
}

/// Dressed-state oracle: the v=0 doublet positions equal the eigenvalues of
/// the RF-dressed two-level block, +-Omega_RF/2.
#[test]
fn dressed_state_eigenvalue_oracle() {
    let rabi = TAU * 2.23e6;
    // Oracle: diagonalize [[0, -O/2], [-O/2, 0]].
    let block = nalgebra::DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(0.0, 0.0),
            Complex64::new(-rabi / 2.0, 0.0),
            Complex64::new(-rabi / 2.0, 0.0),
            Complex64::new(0.0, 0.0),
        ],
    );
    let eig = block.symmetric_eigen();
    let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
    eigenvalues.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let oracle_splitting = (eigenvalues[1] - eigenvalues[0]) / TAU;

    let scheme = presets::cs_four_level(TAU * 0.2e6, TAU * 0.4e6, rabi, 0.0, 0.0, 0.0);
    let trace = spectroscopy::doppler_averaged_trace(
        &scheme,
        &DephasingBudget::zero(),
        &CellConditions::default(),
        &VelocityGrid::single(0.0),
        &grid_hz(2.8e6, 2001),
    )
    .unwrap();
    let (_, _, splitting) = spectroscopy::find_at_peaks(&trace).unwrap();
    assert!(
        (splitting - oracle_splitting).abs() / oracle_splitting < 0.02,
        "splitting {splitting} vs dressed-state oracle {oracle_splitting}"
    );
}

/// Budget assembly at room temperature reproduces the reference budget rates:
/// laser and magnetic exactly (defaults), collisional and transit within 20%.
#[test]
fn budget_tracks_reference_values() {
    let conditions = CellConditions::default();
    let budget = dephasing::assemble_budget(
        &conditions,
        &GasParams::cs_52d52(),
        &BudgetOverrides::default(),
    )
    .unwrap();
    assert_eq!(budget.laser, TAU * 70e3);
    assert_eq!(budget.magnetic, TAU * 50e3);
    assert!((budget.collisional / (TAU * 6e3) - 1.0).abs() < 0.2);
    assert!((budget.transit / (TAU * 300e3) - 1.0).abs() < 0.2);
}
