//! Resolved preset configurations: reference values and golden files.

use rydsense::constants::TAU;
use rydsense::scenario::{self, ScenarioConfig, ScenarioKind};

fn resolved_json(kind: ScenarioKind) -> serde_json::Value {
    let resolved = scenario::resolve(&ScenarioConfig::preset(kind)).unwrap();
    serde_json::to_value(&resolved).unwrap()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * b.abs().max(1.0)
}

#[test]
fn fig2b_defaults_match_reference() {
    let r = scenario::resolve(&ScenarioConfig::preset(ScenarioKind::Fig2bAt)).unwrap();
    // Fig. 2 Rabi frequencies: probe 2pi x 1.8 MHz, coupling 2pi x 0.5 MHz.
    assert!(close(r.scheme.couplings[0].rabi, TAU * 1.8e6));
    assert!(close(r.scheme.couplings[1].rabi, TAU * 0.5e6));
    // Reference dephasing budget.
    assert!(close(r.budget.laser, TAU * 70e3));
    assert!(close(r.budget.transit, TAU * 300e3));
    assert!(close(r.budget.collisional, TAU * 6e3));
    assert!(close(r.budget.magnetic, TAU * 50e3));
    assert_eq!(r.budget.rydberg_rydberg, 0.0);
    // 4 cm cell at room temperature and density.
    assert!(close(r.conditions.length, 0.04));
    assert!(close(r.conditions.temperature, 294.0));
    assert!(close(r.conditions.density, 3.1e16));
    assert!(close(r.conditions.probe_diameter, 1.36e-3));
}

#[test]
fn fig3_defaults_match_reference() {
    let r = scenario::resolve(&ScenarioConfig::preset(ScenarioKind::Fig3Power)).unwrap();
    let couplings: Vec<f64> = r.rabi_pairs_hz.iter().map(|p| p.1).collect();
    assert_eq!(couplings, vec![3.3e6, 3.3e6, 2.7e6, 2.7e6, 2.7e6]);
    assert!(close(r.budget.laser, TAU * 70e3));
    assert!(close(r.budget.transit, TAU * 300e3));
    assert!(close(r.budget.collisional, TAU * 6e3));
    assert!(close(r.budget.magnetic, TAU * 50e3));
    assert!(r.fields_v_per_m.first() == Some(&0.0));
    assert!(close(*r.fields_v_per_m.last().unwrap(), 0.1)); // 1 mV/cm
}

#[test]
fn fig4b_fig5_defaults_match_reference() {
    let r4 =
        scenario::resolve(&ScenarioConfig::preset(ScenarioKind::Fig4bDensityResponse)).unwrap();
    assert!(close(r4.scheme.couplings[0].rabi, TAU * 1.3e6));
    assert!(close(r4.scheme.couplings[1].rabi, TAU * 0.8e6));
    assert!(close(r4.conditions.coupling_diameter, 0.50e-3));

    let r5 = scenario::resolve(&ScenarioConfig::preset(ScenarioKind::Fig5Transit)).unwrap();
    assert!(close(r5.scheme.couplings[0].rabi, TAU * 1.7e6));
    assert!(close(r5.scheme.couplings[1].rabi, TAU * 0.7e6));
    assert_eq!(r5.diameters_m, vec![0.320e-3, 0.500e-3, 1.100e-3]);
}

#[test]
fn fig6_defaults_match_reference() {
    let r = scenario::resolve(&ScenarioConfig::preset(ScenarioKind::Fig6ThreePhoton)).unwrap();
    assert_eq!(r.scheme.n(), 5);
    assert!(close(r.scheme.couplings[0].rabi, TAU * 1.8e6)); // Omega_p
    assert!(close(r.scheme.couplings[1].rabi, TAU * 1.8e6)); // Omega_s
    assert!(close(r.scheme.couplings[2].rabi, TAU * 50e3)); // Omega_c
    assert!(close(r.scheme.couplings[0].detuning, TAU * 500e6));
    assert!(close(r.scheme.couplings[1].detuning, -TAU * 500e6));
    assert!(close(r.scheme.couplings[2].detuning, -TAU * 5e3));
    assert!(close(r.scheme.couplings[3].detuning, TAU * 5e3));
    assert!(close(r.conditions.probe_diameter, 5e-3)); // 5 mm beam
}

#[test]
fn resolved_configs_match_golden_files() {
    for kind in [
        ScenarioKind::Fig2bAt,
        ScenarioKind::Fig3Power,
        ScenarioKind::Fig4aFwhmVsDensity,
        ScenarioKind::Fig4bDensityResponse,
        ScenarioKind::Fig5Transit,
        ScenarioKind::Fig6ThreePhoton,
    ] {
        let golden_path = format!(
            "{}/tests/golden/{}.json",
            env!("CARGO_MANIFEST_DIR"),
            kind.name()
        );
        let golden: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(&golden_path)
                .unwrap_or_else(|e| panic!("missing golden file {golden_path}: {e}")),
        )
        .unwrap();
        let actual = resolved_json(kind);
        assert_eq!(
            actual,
            golden,
            "resolved config drifted for {}",
            kind.name()
        );
    }
}

#[test]
fn unknown_config_keys_fail_closed() {
    let err = ScenarioConfig::from_json(r#"{"scenario": "fig3_power", "nope": 1}"#).unwrap_err();
    assert!(err.is_config());
    let err =
        ScenarioConfig::from_json(r#"{"scenario": "fig3_power", "numerics": {"velocity_pts": 3}}"#)
            .unwrap_err();
    assert!(err.is_config());
}

#[test]
fn custom_requires_sweep_and_sweep_only_for_custom() {
    let cfg = ScenarioConfig::preset(ScenarioKind::Custom);
    assert!(scenario::resolve(&cfg).is_err());

    let mut cfg = ScenarioConfig::preset(ScenarioKind::Fig3Power);
    cfg.sweep = Some(scenario::SweepConfig {
        parameter: "budget.laser_hz".into(),
        start: 0.0,
        stop: 1e5,
        points: 3,
    });
    assert!(scenario::resolve(&cfg).is_err());
}

#[test]
fn custom_sweep_identical_endpoints_identical_rows() {
    let mut cfg = ScenarioConfig::preset(ScenarioKind::Custom);
    cfg.doppler_free = true;
    cfg.numerics.detuning_points = Some(41);
    cfg.sweep = Some(scenario::SweepConfig {
        parameter: "budget.laser_hz".into(),
        start: 70e3,
        stop: 70e3,
        points: 2,
    });
    let out = scenario::run_scenario(&cfg).unwrap();
    let table = &out.tables[0];
    assert_eq!(table.rows.len(), 2);
    assert_eq!(table.rows[0], table.rows[1]);
}

#[test]
fn grid_refinement_stability() {
    // Doubling the detuning grid moves summary statistics by < 1%.
    let run = |points: usize| {
        let mut cfg = ScenarioConfig::preset(ScenarioKind::Fig2bAt);
        cfg.doppler_free = true;
        cfg.fields_v_per_m = Some(vec![0.2]);
        cfg.numerics.detuning_points = Some(points);
        let out = scenario::run_scenario(&cfg).unwrap();
        let split_table = out.tables.iter().find(|t| t.id == "splittings").unwrap();
        split_table.rows[0][2]
    };
    let coarse = run(801);
    let fine = run(1601);
    assert!(
        ((fine - coarse) / fine).abs() < 0.01,
        "splitting moved {coarse} -> {fine} on refinement"
    );
}
