//! Scenario execution: dispatch, sweep evaluation and report assembly.

use serde_json::json;

use crate::budget::DephasingBudget;
use crate::constants::TAU;
use crate::dephasing;
use crate::error::{Result, RydError};
use crate::scheme::LadderScheme;
use crate::sensing::{self, WeakFieldPoint};
use crate::solver;
use crate::spectroscopy::{self, CellConditions, SpectralTrace};
use crate::velocity::{make_velocity_grid, VelocityGrid};

use super::config::{resolve, ResolvedConfig, ScenarioConfig, ScenarioKind};
use super::output::{config_hash, Table};

/// Result of one scenario run: tables for CSV emission plus a JSON report.
#[derive(Debug, Clone)]
pub struct ScenarioOutput {
    pub name: String,
    pub resolved: ResolvedConfig,
    pub config_hash: String,
    pub tables: Vec<Table>,
    pub report: serde_json::Value,
}

fn velocity_grid(resolved: &ResolvedConfig) -> Result<VelocityGrid> {
    if resolved.numerics.doppler_free {
        Ok(VelocityGrid::single(0.0))
    } else {
        make_velocity_grid(
            resolved.conditions.temperature,
            resolved.gas.mass,
            resolved.numerics.velocity_points,
            resolved.numerics.velocity_span,
        )
    }
}

fn detuning_grid(resolved: &ResolvedConfig) -> Vec<f64> {
    let n = resolved.numerics.detuning_points;
    let span = TAU * resolved.numerics.detuning_span_hz;
    (0..n)
        .map(|i| -span + 2.0 * span * i as f64 / (n - 1) as f64)
        .collect()
}

fn set_rf_rabi(scheme: &LadderScheme, rabi: f64) -> Result<LadderScheme> {
    let idx = scheme
        .rf_coupling_index()
        .ok_or_else(|| RydError::InvalidScheme("scheme has no RF coupling".into()))?;
    let mut out = scheme.clone();
    out.couplings[idx].rabi = rabi;
    Ok(out)
}

/// Run any scenario.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioOutput> {
    let resolved = resolve(config)?;
    let hash = config_hash(&resolved);
    let (tables, report) = match config.scenario {
        ScenarioKind::Fig2bAt => fig2b_at(&resolved)?,
        ScenarioKind::Fig3Power => fig3_power(&resolved)?,
        ScenarioKind::Fig4aFwhmVsDensity => fig4a_fwhm_vs_density(&resolved)?,
        ScenarioKind::Fig4bDensityResponse => fig4b_density_response(&resolved)?,
        ScenarioKind::Fig5Transit => fig5_transit(&resolved)?,
        ScenarioKind::Fig6ThreePhoton => three_photon(&resolved)?,
        ScenarioKind::Custom => custom_sweep(&resolved)?,
    };
    Ok(ScenarioOutput {
        name: resolved.scenario.clone(),
        resolved,
        config_hash: hash,
        tables,
        report,
    })
}

/// Run the three-photon scenario directly.
pub fn run_three_photon(config: &ScenarioConfig) -> Result<ScenarioOutput> {
    if config.scenario != ScenarioKind::Fig6ThreePhoton {
        return Err(RydError::Config(
            "run_three_photon requires scenario = fig6_three_photon".into(),
        ));
    }
    run_scenario(config)
}

/// Probe transmission traces per RF field plus the AT splitting summary. The
/// splitting is read off the lock-in lineshape, which stays resolvable at
/// full optical depth (the raw v=0 transmission saturates to zero).
fn fig2b_at(resolved: &ResolvedConfig) -> Result<(Vec<Table>, serde_json::Value)> {
    let grid = velocity_grid(resolved)?;
    let detunings = detuning_grid(resolved);
    let dipole = solver::natural_probe_dipole(&resolved.scheme)?;
    let dark = dark_scheme(&resolved.scheme)?;
    let off_profile = absorption_profile(
        &dark,
        &resolved.budget,
        &grid,
        resolved.conditions.density,
        dipole,
        &detunings,
    )?;

    let mut trace_table = Table::new("traces", {
        let mut cols = vec!["probe_detuning (MHz)".to_string()];
        for &f in &resolved.fields_v_per_m {
            cols.push(format!("transmission at {:.4} mV/cm (fraction)", f * 10.0));
        }
        cols
    });
    let mut split_table = Table::new(
        "splittings",
        vec![
            "field (mV/cm)".to_string(),
            "rf_rabi (MHz)".to_string(),
            "splitting (MHz)".to_string(),
            "splitting_corrected (MHz)".to_string(),
            "field_from_splitting (mV/cm)".to_string(),
        ],
    );

    // Scanning the probe of a counterpropagating cascade compresses the
    // apparent splitting by k_p/k_c: the two-photon detuning of the velocity
    // class a probe detuning addresses moves k_c/k_p times faster than the
    // probe. Doppler free there is no velocity selection and no correction.
    let correction = if resolved.numerics.doppler_free {
        1.0
    } else {
        (resolved.scheme.couplings[1].wavevector / resolved.scheme.couplings[0].wavevector).abs()
    };

    let mut transmissions: Vec<Vec<f64>> = Vec::new();
    let mut split_rows = Vec::new();
    for &field in &resolved.fields_v_per_m {
        let rabi = sensing::rabi_for_field(field, &resolved.rf_transition);
        let scheme = set_rf_rabi(&resolved.scheme, rabi)?;
        let on_profile = absorption_profile(
            &scheme,
            &resolved.budget,
            &grid,
            resolved.conditions.density,
            dipole,
            &detunings,
        )?;
        transmissions.push(
            on_profile
                .iter()
                .map(|&a| (-a * resolved.conditions.length).exp().clamp(0.0, 1.0))
                .collect(),
        );
        let lock_in = normalized_difference_trace(&detunings, &off_profile, &on_profile)?;
        let splitting_mhz = match spectroscopy::find_at_peaks(&lock_in) {
            // A resonant-RF doublet is symmetric about zero detuning; an
            // asymmetric pair is shoulder structure, not a resolved doublet.
            Ok((p1, p2, split_hz)) if (p1 + p2).abs() < 0.25 * (p2 - p1).abs() => split_hz / 1e6,
            Ok(_) | Err(RydError::UnresolvedSplitting) => f64::NAN,
            Err(e) => return Err(e),
        };
        let corrected = splitting_mhz * correction;
        let field_back = if corrected.is_nan() {
            f64::NAN
        } else {
            sensing::at_splitting_to_field(corrected * 1e6, &resolved.rf_transition)? * 10.0
        };
        split_rows.push(json!({
            "field_v_per_m": field,
            "rf_rabi_mhz": rabi / TAU / 1e6,
            "splitting_mhz": if splitting_mhz.is_nan() { None } else { Some(splitting_mhz) },
            "splitting_corrected_mhz": if corrected.is_nan() { None } else { Some(corrected) },
        }));
        split_table.push(vec![
            field * 10.0,
            rabi / TAU / 1e6,
            splitting_mhz,
            corrected,
            field_back,
        ]);
    }
    for (i, &d) in detunings.iter().enumerate() {
        let mut row = vec![d / TAU / 1e6];
        for t in &transmissions {
            row.push(t[i]);
        }
        trace_table.push(row);
    }
    let report = json!({ "splittings": split_rows });
    Ok((vec![trace_table, split_table], report))
}

fn weak_field_table(
    resolved: &ResolvedConfig,
    curves: &[(String, Vec<WeakFieldPoint>)],
    quantity: &str,
) -> Table {
    let mut cols = vec!["field (mV/cm)".to_string()];
    for (label, _) in curves {
        cols.push(format!("{quantity} {label} (%)"));
    }
    let mut table = Table::new("response", cols);
    for (i, &field) in resolved.fields_v_per_m.iter().enumerate() {
        let mut row = vec![field * 10.0];
        for (_, curve) in curves {
            row.push(curve[i].delta_t_percent);
        }
        table.push(row);
    }
    table
}

fn slopes_report(curves: &[(String, Vec<WeakFieldPoint>)]) -> Result<serde_json::Value> {
    let mut entries = Vec::new();
    for (label, curve) in curves {
        entries.push(json!({
            "curve": label,
            "slope_percent_per_v_per_m": sensing::slope_at_zero(curve)?,
        }));
    }
    Ok(json!(entries))
}

/// ΔT% vs field for the five Rabi pairs of Fig. 3.
fn fig3_power(resolved: &ResolvedConfig) -> Result<(Vec<Table>, serde_json::Value)> {
    let grid = velocity_grid(resolved)?;
    let mut curves = Vec::new();
    for &(probe_hz, coupling_hz) in &resolved.rabi_pairs_hz {
        let mut scheme = resolved.scheme.clone();
        scheme.couplings[0].rabi = TAU * probe_hz;
        scheme.couplings[1].rabi = TAU * coupling_hz;
        let curve = sensing::weak_field_curve(
            &scheme,
            &resolved.budget,
            &resolved.conditions,
            &grid,
            &resolved.rf_transition,
            &resolved.fields_v_per_m,
        )?;
        curves.push((
            format!("Op={:.1}MHz Oc={:.1}MHz", probe_hz / 1e6, coupling_hz / 1e6),
            curve,
        ));
    }
    let table = weak_field_table(resolved, &curves, "delta_t");
    let report = json!({ "slopes": slopes_report(&curves)? });
    Ok((vec![table], report))
}

/// EIT linewidth vs density from the lock-in lineshape (the coupling laser is
/// intensity modulated, so the detected EIT signal is the coupling-on minus
/// coupling-off absorption difference; the one-photon background cancels
/// exactly), plus a linear fit of FWHM against density.
fn fig4a_fwhm_vs_density(resolved: &ResolvedConfig) -> Result<(Vec<Table>, serde_json::Value)> {
    let grid = velocity_grid(resolved)?;
    let detunings = detuning_grid(resolved);
    let dipole = solver::natural_probe_dipole(&resolved.scheme)?;
    let dark = dark_scheme(&resolved.scheme)?;

    let mut table = Table::new(
        "fwhm",
        vec![
            "density (cm^-3)".to_string(),
            "collisional_rate (kHz)".to_string(),
            "fwhm (MHz)".to_string(),
        ],
    );
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &density_cm3 in &resolved.densities_per_cm3 {
        let density = density_cm3 * 1e6;
        let mut conditions = resolved.conditions.clone();
        conditions.density = density;
        let mut budget = resolved.budget.clone();
        budget.collisional =
            dephasing::collision_rate(density, &resolved.gas, conditions.temperature)?;
        let trace = eit_signal_trace(
            &resolved.scheme,
            &dark,
            &budget,
            &grid,
            density,
            dipole,
            &detunings,
        )?;
        let width = spectroscopy::fwhm(&trace)?;
        table.push(vec![
            density_cm3,
            budget.collisional / TAU / 1e3,
            width / 1e6,
        ]);
        xs.push(density_cm3);
        ys.push(width / 1e6);
    }
    let coefficient =
        dephasing::elastic_rate_coefficient(&resolved.gas, resolved.conditions.temperature)?
            + dephasing::inelastic_rate_coefficient(&resolved.gas)?;
    let fit = if xs.len() >= 2 {
        let (slope, intercept) = linear_fit(&xs, &ys)?;
        json!({
            "slope_cm3_mhz": slope,
            "intercept_mhz": intercept,
            "calculated_coefficient_cm3_mhz": coefficient,
        })
    } else {
        json!({ "calculated_coefficient_cm3_mhz": coefficient })
    };
    let report = json!({ "linear_fit": fit });
    Ok((vec![table], report))
}

/// The scheme with its topmost optical coupling (the EIT coupling adjacent to
/// the Rydberg rungs) switched off; the modulation reference of the lock-in.
fn dark_scheme(scheme: &LadderScheme) -> Result<LadderScheme> {
    let idx = scheme
        .couplings
        .iter()
        .enumerate()
        .filter(|(_, c)| c.kind == crate::scheme::CouplingKind::Optical)
        .map(|(i, _)| i)
        .max()
        .ok_or_else(|| RydError::InvalidScheme("scheme has no optical coupling".into()))?;
    let mut dark = scheme.clone();
    dark.couplings[idx].rabi = 0.0;
    Ok(dark)
}

/// Velocity-averaged absorption profile over the detuning grid (parallel,
/// reduced in grid order).
fn absorption_profile(
    scheme: &LadderScheme,
    budget: &DephasingBudget,
    grid: &VelocityGrid,
    density: f64,
    dipole: f64,
    detunings: &[f64],
) -> Result<Vec<f64>> {
    use rayon::prelude::*;
    let relax = solver::build_relaxation(scheme, budget)?;
    detunings
        .par_iter()
        .map(|&d| {
            spectroscopy::averaged_response(scheme, &relax, grid, density, dipole, d)
                .map(|(alpha, _)| alpha)
        })
        .collect()
}

/// Lock-in EIT-signal lineshape: coupling-off minus coupling-on absorption,
/// affine-normalized into [0, 1]. fwhm/find_at_peaks are affine invariant so
/// the normalization does not bias widths.
fn eit_signal_trace(
    scheme: &LadderScheme,
    dark: &LadderScheme,
    budget: &DephasingBudget,
    grid: &VelocityGrid,
    density: f64,
    dipole: f64,
    detunings: &[f64],
) -> Result<SpectralTrace> {
    let on = absorption_profile(scheme, budget, grid, density, dipole, detunings)?;
    let off = absorption_profile(dark, budget, grid, density, dipole, detunings)?;
    normalized_difference_trace(detunings, &off, &on)
}

/// Normalize (off - on) into a [0, 1] pseudo-transmission trace.
fn normalized_difference_trace(
    detunings: &[f64],
    off: &[f64],
    on: &[f64],
) -> Result<SpectralTrace> {
    let diff: Vec<f64> = off.iter().zip(on).map(|(o, a)| o - a).collect();
    let dmax = diff.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let dmin = diff.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(dmax > dmin) {
        return Err(RydError::NoPeak);
    }
    let transmission: Vec<f64> = diff.iter().map(|&v| (v - dmin) / (dmax - dmin)).collect();
    Ok(SpectralTrace {
        detunings: detunings.to_vec(),
        transmission,
        phase: vec![0.0; detunings.len()],
        metadata: json!({"lineshape": "coupling_modulation_normalized"}),
    })
}

fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() < 2 {
        return Err(RydError::Validation("linear fit needs >= 2 points".into()));
    }
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    if denom == 0.0 {
        return Err(RydError::Validation("degenerate fit grid".into()));
    }
    let slope = (n * sxy - sx * sy) / denom;
    Ok((slope, (sy - slope * sx) / n))
}

/// Lock-in EIT-signal response vs field at several temperatures (densities).
/// The EIT-normalized estimator keeps the comparison free of the optical
/// depth growing with density.
fn fig4b_density_response(resolved: &ResolvedConfig) -> Result<(Vec<Table>, serde_json::Value)> {
    let mut curves = Vec::new();
    for &t_k in &resolved.temperatures_k {
        let mut conditions = resolved.conditions.clone();
        conditions.temperature = t_k;
        conditions.density = dephasing::cs_density(t_k)?;
        let mut budget = resolved.budget.clone();
        budget.collisional = dephasing::collision_rate(conditions.density, &resolved.gas, t_k)?;
        let grid = if resolved.numerics.doppler_free {
            VelocityGrid::single(0.0)
        } else {
            make_velocity_grid(
                t_k,
                resolved.gas.mass,
                resolved.numerics.velocity_points,
                resolved.numerics.velocity_span,
            )?
        };
        let curve = sensing::eit_signal_curve(
            &resolved.scheme,
            &budget,
            &conditions,
            &grid,
            &resolved.rf_transition,
            &resolved.fields_v_per_m,
        )?;
        curves.push((
            format!("T={t_k}K rho={:.2e}cm^-3", conditions.density / 1e6),
            curve,
        ));
    }
    let table = weak_field_table(resolved, &curves, "delta_eit_signal");
    // Sensitivity figures for the first (lowest-density) operating point.
    let photon_snr = sensing::photon_shot_noise_snr(
        10e-6,
        0.5,
        1.0,
        TAU / resolved.scheme.probe().wavevector.abs(),
    )?;
    let floor = sensing::noise_floor_percent(photon_snr, sensing::EIT_SIGNAL_FRACTION)?
        / sensing::ABSORPTION_FRACTION;
    let sensitivity = sensing::SensitivityReport {
        slope_at_zero: sensing::slope_at_zero(&curves[0].1)?,
        min_detectable_field: sensing::min_detectable_field(&curves[0].1, floor)?,
        atom_shot_limit: sensing::atom_shot_noise_limit(496.0, 5e-6, &resolved.rf_transition)?,
        photon_snr,
        config: json!({
            "curve": curves[0].0,
            "noise_floor_percent_rt_hz": floor,
            "eit_signal_fraction": sensing::EIT_SIGNAL_FRACTION,
            "absorption_fraction": sensing::ABSORPTION_FRACTION,
            "detector_power_w": 10e-6,
            "quantum_efficiency": 0.5,
            "t2_s": 5e-6,
            "n_atoms": 496.0,
        }),
    };
    let report = json!({
        "slopes": slopes_report(&curves)?,
        "sensitivity": sensitivity,
    });
    Ok((vec![table], report))
}

/// Lock-in EIT-signal response vs field for the three coupling beam
/// diameters.
fn fig5_transit(resolved: &ResolvedConfig) -> Result<(Vec<Table>, serde_json::Value)> {
    let grid = velocity_grid(resolved)?;
    let mut curves = Vec::new();
    let mut transit_rates = Vec::new();
    for &d in &resolved.diameters_m {
        let mut conditions = resolved.conditions.clone();
        conditions.coupling_diameter = d;
        let mut budget = resolved.budget.clone();
        budget.transit = dephasing::transit_broadening(
            d.min(conditions.probe_diameter),
            conditions.temperature,
            resolved.gas.mass,
        )?;
        transit_rates.push(json!({
            "diameter_m": d,
            "transit_khz": budget.transit / TAU / 1e3,
        }));
        let curve = sensing::eit_signal_curve(
            &resolved.scheme,
            &budget,
            &conditions,
            &grid,
            &resolved.rf_transition,
            &resolved.fields_v_per_m,
        )?;
        curves.push((format!("d={:.3}mm", d * 1e3), curve));
    }
    let table = weak_field_table(resolved, &curves, "delta_eit_signal");
    let report = json!({
        "transit_rates": transit_rates,
        "slopes": slopes_report(&curves)?,
    });
    Ok((vec![table], report))
}

/// Three-photon readout. The detected quantity is the lock-in EIT signal
/// (coupling-laser modulation), where the splitting doublet is visible on a
/// flat background; the raw probe feature sits on the far-detuned Doppler
/// tail at a contrast far below anything measurable.
fn three_photon(resolved: &ResolvedConfig) -> Result<(Vec<Table>, serde_json::Value)> {
    let grid = velocity_grid(resolved)?;
    let detunings = detuning_grid(resolved);
    let dipole = solver::natural_probe_dipole(&resolved.scheme)?;
    let dark = dark_scheme(&resolved.scheme)?;

    let mut split_table = Table::new(
        "splitting",
        vec![
            "field (mV/cm)".to_string(),
            "rf_rabi (MHz)".to_string(),
            "splitting (MHz)".to_string(),
        ],
    );
    let mut trace_table = Table::new("traces", {
        let mut cols = vec!["probe_detuning_offset (MHz)".to_string()];
        for &f in &resolved.fields_v_per_m {
            cols.push(format!("eit_signal at {:.4} mV/cm (normalized)", f * 10.0));
        }
        cols
    });

    let mut traces = Vec::new();
    let mut split_rows = Vec::new();
    for &field in &resolved.fields_v_per_m {
        let rabi = sensing::rabi_for_field(field, &resolved.rf_transition);
        let scheme = set_rf_rabi(&resolved.scheme, rabi)?;
        let trace = eit_signal_trace(
            &scheme,
            &dark,
            &resolved.budget,
            &grid,
            resolved.conditions.density,
            dipole,
            &detunings,
        )?;
        let splitting_mhz = match spectroscopy::find_at_peaks(&trace) {
            Ok((_, _, split_hz)) => split_hz / 1e6,
            Err(RydError::UnresolvedSplitting) => f64::NAN,
            Err(e) => return Err(e),
        };
        split_table.push(vec![field * 10.0, rabi / TAU / 1e6, splitting_mhz]);
        split_rows.push(json!({
            "field_v_per_m": field,
            "rf_rabi_mhz": rabi / TAU / 1e6,
            "splitting_mhz": if splitting_mhz.is_nan() { None } else { Some(splitting_mhz) },
        }));
        traces.push(trace);
    }
    for (i, &d) in detunings.iter().enumerate() {
        let mut row = vec![d / TAU / 1e6];
        for t in &traces {
            row.push(t.transmission[i]);
        }
        trace_table.push(row);
    }

    // Weak-field response on resonance (inset b), nV/cm regime.
    let weak_fields: Vec<f64> = (0..11).map(|i| 1e-5 * i as f64).collect();
    let curve = sensing::eit_signal_curve(
        &resolved.scheme,
        &resolved.budget,
        &resolved.conditions,
        &grid,
        &resolved.rf_transition,
        &weak_fields,
    )?;
    let mut response_table = Table::new(
        "response",
        vec![
            "field (nV/cm)".to_string(),
            "delta_eit_signal (%)".to_string(),
        ],
    );
    for p in &curve {
        response_table.push(vec![p.field * 1e7, p.delta_t_percent]);
    }

    let field_at_1khz = sensing::at_splitting_to_field(1e3, &resolved.rf_transition)?;
    let report = json!({
        "splittings": split_rows,
        "field_at_1khz_rabi_nv_per_cm": field_at_1khz * 1e9 / 100.0,
    });
    Ok((vec![split_table, trace_table, response_table], report))
}

/// Single-parameter sweep over the four-level scheme; per point reports the
/// on-resonance, minimum and maximum transmission of the trace.
fn custom_sweep(resolved: &ResolvedConfig) -> Result<(Vec<Table>, serde_json::Value)> {
    let sweep = resolved
        .sweep
        .as_ref()
        .ok_or_else(|| RydError::Config("custom scenario requires a sweep".into()))?;
    let detunings = detuning_grid(resolved);
    let values: Vec<f64> = (0..sweep.points)
        .map(|i| sweep.start + (sweep.stop - sweep.start) * i as f64 / (sweep.points - 1) as f64)
        .collect();

    let mut table = Table::new(
        "sweep",
        vec![
            format!("{} (config units)", sweep.parameter),
            "transmission_on_resonance (fraction)".to_string(),
            "min_transmission (fraction)".to_string(),
            "max_transmission (fraction)".to_string(),
        ],
    );
    for &value in &values {
        let (scheme, budget, conditions) = apply_sweep_value(resolved, &sweep.parameter, value)?;
        let grid = if resolved.numerics.doppler_free {
            VelocityGrid::single(0.0)
        } else {
            make_velocity_grid(
                conditions.temperature,
                resolved.gas.mass,
                resolved.numerics.velocity_points,
                resolved.numerics.velocity_span,
            )?
        };
        let trace =
            spectroscopy::doppler_averaged_trace(&scheme, &budget, &conditions, &grid, &detunings)?;
        let center = trace.transmission[trace.len() / 2];
        let tmin = trace
            .transmission
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        let tmax = trace
            .transmission
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        table.push(vec![value, center, tmin, tmax]);
    }
    let report = json!({ "parameter": sweep.parameter, "points": sweep.points });
    Ok((vec![table], report))
}

fn apply_sweep_value(
    resolved: &ResolvedConfig,
    parameter: &str,
    value: f64,
) -> Result<(LadderScheme, DephasingBudget, CellConditions)> {
    let mut scheme = resolved.scheme.clone();
    let mut budget = resolved.budget.clone();
    let mut conditions = resolved.conditions.clone();
    match parameter {
        "budget.transit_hz" => budget.transit = TAU * value,
        "budget.collisional_hz" => budget.collisional = TAU * value,
        "budget.laser_hz" => budget.laser = TAU * value,
        "budget.magnetic_hz" => budget.magnetic = TAU * value,
        "budget.rydberg_rydberg_hz" => budget.rydberg_rydberg = TAU * value,
        "conditions.temperature_k" => {
            conditions.temperature = value;
            conditions.density = dephasing::cs_density(value)?;
            budget.collisional =
                dephasing::collision_rate(conditions.density, &resolved.gas, value)?;
        }
        "scheme.probe_rabi_hz" => scheme.couplings[0].rabi = TAU * value,
        "scheme.coupling_rabi_hz" => scheme.couplings[1].rabi = TAU * value,
        "scheme.rf_rabi_hz" => {
            let idx = scheme
                .rf_coupling_index()
                .ok_or_else(|| RydError::InvalidScheme("no RF coupling".into()))?;
            scheme.couplings[idx].rabi = TAU * value;
        }
        "rf.field_v_per_m" => {
            let idx = scheme
                .rf_coupling_index()
                .ok_or_else(|| RydError::InvalidScheme("no RF coupling".into()))?;
            scheme.couplings[idx].rabi = sensing::rabi_for_field(value, &resolved.rf_transition);
        }
        other => {
            return Err(RydError::Config(format!(
                "unknown sweep parameter `{other}`"
            )))
        }
    }
    budget.validate()?;
    conditions.validate()?;
    Ok((scheme, budget, conditions))
}
