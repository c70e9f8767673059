//! Scenario configuration: the JSON surface, preset defaults, and the fully
//! resolved form that gets hashed and recorded next to every output.
//!
//! Parsing fails closed: unknown keys are errors. All config frequencies are
//! ordinary Hz; they are converted to angular rates when the scheme and
//! budget are built.

use serde::{Deserialize, Serialize};

use crate::budget::{Assignment, CoherenceAssignment, DephasingBudget};
use crate::constants::*;
use crate::dephasing::{self, BudgetOverrides, GasParams};
use crate::error::{Result, RydError};
use crate::presets;
use crate::scheme::LadderScheme;
use crate::sensing::RfTransition;
use crate::spectroscopy::CellConditions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Fig2bAt,
    Fig3Power,
    Fig4aFwhmVsDensity,
    Fig4bDensityResponse,
    Fig5Transit,
    Fig6ThreePhoton,
    Custom,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 7] = [
        ScenarioKind::Fig2bAt,
        ScenarioKind::Fig3Power,
        ScenarioKind::Fig4aFwhmVsDensity,
        ScenarioKind::Fig4bDensityResponse,
        ScenarioKind::Fig5Transit,
        ScenarioKind::Fig6ThreePhoton,
        ScenarioKind::Custom,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::Fig2bAt => "fig2b_at",
            ScenarioKind::Fig3Power => "fig3_power",
            ScenarioKind::Fig4aFwhmVsDensity => "fig4a_fwhm_vs_density",
            ScenarioKind::Fig4bDensityResponse => "fig4b_density_response",
            ScenarioKind::Fig5Transit => "fig5_transit",
            ScenarioKind::Fig6ThreePhoton => "fig6_three_photon",
            ScenarioKind::Custom => "custom",
        }
    }

    pub fn summary(&self) -> &'static str {
        match self {
            ScenarioKind::Fig2bAt => {
                "Autler-Townes split probe spectra for a list of RF field amplitudes"
            }
            ScenarioKind::Fig3Power => {
                "transmission change vs RF field for five probe/coupling Rabi pairs"
            }
            ScenarioKind::Fig4aFwhmVsDensity => "EIT linewidth vs atomic density with linear fit",
            ScenarioKind::Fig4bDensityResponse => {
                "transmission change vs RF field at several cell temperatures"
            }
            ScenarioKind::Fig5Transit => {
                "transmission change vs RF field for three coupling beam sizes"
            }
            ScenarioKind::Fig6ThreePhoton => {
                "three-photon readout: splitting vs field and weak-field response"
            }
            ScenarioKind::Custom => "single-parameter sweep over a four-level trace",
        }
    }
}

/// Overrides for the preset scheme parameters, ordinary Hz.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SchemeOverrides {
    pub probe_rabi_hz: Option<f64>,
    pub coupling_rabi_hz: Option<f64>,
    /// Second-step Rabi frequency of the three-photon ladder.
    pub second_rabi_hz: Option<f64>,
    pub probe_detuning_hz: Option<f64>,
    pub coupling_detuning_hz: Option<f64>,
    pub second_detuning_hz: Option<f64>,
    pub rf_detuning_hz: Option<f64>,
}

/// Overrides for the dephasing budget, ordinary Hz.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BudgetConfig {
    pub transit_hz: Option<f64>,
    pub collisional_hz: Option<f64>,
    pub laser_hz: Option<f64>,
    pub magnetic_hz: Option<f64>,
    pub rydberg_rydberg_hz: Option<f64>,
    pub assignment: Option<Vec<CoherenceAssignment>>,
}

impl BudgetConfig {
    fn to_overrides(&self) -> BudgetOverrides {
        BudgetOverrides {
            transit: self.transit_hz.map(|v| TAU * v),
            collisional: self.collisional_hz.map(|v| TAU * v),
            laser: self.laser_hz.map(|v| TAU * v),
            magnetic: self.magnetic_hz.map(|v| TAU * v),
            rydberg_rydberg: self.rydberg_rydberg_hz.map(|v| TAU * v),
            assignment: self.assignment.clone().map(Assignment::Explicit),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConditionsConfig {
    pub temperature_k: Option<f64>,
    /// Overrides the vapor-pressure value.
    pub density_per_cm3: Option<f64>,
    pub length_m: Option<f64>,
    pub probe_diameter_m: Option<f64>,
    pub coupling_diameter_m: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// One of: budget.{transit,collisional,laser,magnetic,rydberg_rydberg}_hz,
    /// conditions.temperature_k, scheme.{probe,coupling,rf}_rabi_hz,
    /// rf.field_v_per_m.
    pub parameter: String,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericsConfig {
    pub velocity_points: Option<usize>,
    pub velocity_span: Option<f64>,
    pub detuning_points: Option<usize>,
    /// Half width of the probe detuning window, Hz.
    pub detuning_span_hz: Option<f64>,
}

/// The JSON configuration document accepted by `run`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    #[serde(default)]
    pub scheme: SchemeOverrides,
    #[serde(default)]
    pub budget: BudgetConfig,
    #[serde(default)]
    pub conditions: ConditionsConfig,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub numerics: NumericsConfig,
    /// Restrict the velocity grid to v = 0.
    #[serde(default)]
    pub doppler_free: bool,
    /// RF field amplitudes, V/m; scenario presets provide defaults.
    #[serde(default)]
    pub fields_v_per_m: Option<Vec<f64>>,
    /// Cell temperatures for fig4b_density_response, K.
    #[serde(default)]
    pub temperatures_k: Option<Vec<f64>>,
    /// Coupling beam diameters for fig5_transit, m.
    #[serde(default)]
    pub diameters_m: Option<Vec<f64>>,
    /// Densities for fig4a_fwhm_vs_density, cm^-3.
    #[serde(default)]
    pub densities_per_cm3: Option<Vec<f64>>,
}

impl ScenarioConfig {
    pub fn preset(scenario: ScenarioKind) -> Self {
        ScenarioConfig {
            scenario,
            scheme: SchemeOverrides::default(),
            budget: BudgetConfig::default(),
            conditions: ConditionsConfig::default(),
            sweep: None,
            numerics: NumericsConfig::default(),
            doppler_free: false,
            fields_v_per_m: None,
            temperatures_k: None,
            diameters_m: None,
            densities_per_cm3: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| RydError::Config(e.to_string()))
    }
}

/// Numerics after defaulting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedNumerics {
    pub velocity_points: usize,
    pub velocity_span: f64,
    pub detuning_points: usize,
    pub detuning_span_hz: f64,
    pub doppler_free: bool,
}

/// Everything a run depends on, fully expanded. Serialized as the JSON
/// sidecar and hashed into the CSV header.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub scenario: String,
    pub scheme: LadderScheme,
    pub budget: DephasingBudget,
    pub conditions: CellConditions,
    pub gas: GasParams,
    pub rf_transition: RfTransition,
    pub numerics: ResolvedNumerics,
    pub fields_v_per_m: Vec<f64>,
    pub temperatures_k: Vec<f64>,
    pub diameters_m: Vec<f64>,
    pub densities_per_cm3: Vec<f64>,
    /// (probe Rabi Hz, coupling Rabi Hz) per curve, fig3_power only.
    pub rabi_pairs_hz: Vec<(f64, f64)>,
    pub sweep: Option<SweepConfig>,
}

/// The fig3_power reference dephasing budget: Γl = 2π x 70 kHz, Γt = 2π x 300 kHz,
/// Γcol = 2π x 6 kHz, Γm = 2π x 50 kHz, Γ_Ryd-Ryd = 0.
pub fn fig3_reference_budget() -> DephasingBudget {
    DephasingBudget {
        transit: TAU * 300e3,
        collisional: TAU * 6e3,
        laser: TAU * 70e3,
        magnetic: TAU * 50e3,
        rydberg_rydberg: 0.0,
        assignment: Assignment::Default,
    }
}

/// The five (probe, coupling) Rabi pairs of the fig3_power curves, Hz. The
/// reference data fix the coupling values (3.3 and 2.7 MHz); the probe values span
/// the broadened-to-weak-probe progression described there.
pub const FIG3_RABI_PAIRS_HZ: [(f64, f64); 5] = [
    (3.0e6, 3.3e6),
    (2.0e6, 3.3e6),
    (1.3e6, 2.7e6),
    (0.8e6, 2.7e6),
    (0.5e6, 2.7e6),
];

fn apply_conditions(
    config: &ConditionsConfig,
    default_coupling_diameter: f64,
) -> Result<CellConditions> {
    let temperature = config.temperature_k.unwrap_or(294.0);
    let density = match config.density_per_cm3 {
        Some(d) => d * 1e6,
        None => dephasing::cs_density(temperature)?,
    };
    let conditions = CellConditions {
        temperature,
        density,
        length: config.length_m.unwrap_or(0.04),
        probe_diameter: config.probe_diameter_m.unwrap_or(1.36e-3),
        coupling_diameter: config
            .coupling_diameter_m
            .unwrap_or(default_coupling_diameter),
    };
    conditions.validate()?;
    Ok(conditions)
}

fn hz(v: Option<f64>, default_hz: f64) -> f64 {
    TAU * v.unwrap_or(default_hz)
}

/// Expand a config into the concrete scheme/budget/conditions/grids.
pub fn resolve(config: &ScenarioConfig) -> Result<ResolvedConfig> {
    let kind = config.scenario;
    let s = &config.scheme;
    let gas = GasParams::cs_52d52();
    let rf_transition = RfTransition::cs_52d52_53p32();

    // Per-scenario defaults.
    let (scheme, conditions, numerics_default, fields_default): (
        LadderScheme,
        CellConditions,
        (usize, f64, usize, f64),
        Vec<f64>,
    ) = match kind {
        ScenarioKind::Fig2bAt => {
            let scheme = presets::cs_four_level(
                hz(s.probe_rabi_hz, 1.8e6),
                hz(s.coupling_rabi_hz, 0.5e6),
                0.0,
                hz(s.probe_detuning_hz, 0.0),
                hz(s.coupling_detuning_hz, 0.0),
                hz(s.rf_detuning_hz, 0.0),
            );
            let cond = apply_conditions(&config.conditions, 0.12e-3)?;
            // mV/cm-decade fields: Omega_RF from 2pi x ~1.1 to 2pi x 10 MHz.
            let fields = vec![0.05, 0.10, 0.15, 0.22, 0.30, 0.448];
            (scheme, cond, (4001, 4.0, 801, 8e6), fields)
        }
        ScenarioKind::Fig3Power
        | ScenarioKind::Fig4bDensityResponse
        | ScenarioKind::Fig5Transit => {
            let (probe_default, coupling_default, coupling_diameter) = match kind {
                ScenarioKind::Fig3Power => (3.0e6, 3.3e6, 0.12e-3),
                ScenarioKind::Fig4bDensityResponse => (1.3e6, 0.8e6, 0.50e-3),
                _ => (1.7e6, 0.7e6, 0.50e-3),
            };
            let scheme = presets::cs_four_level(
                hz(s.probe_rabi_hz, probe_default),
                hz(s.coupling_rabi_hz, coupling_default),
                0.0,
                hz(s.probe_detuning_hz, 0.0),
                hz(s.coupling_detuning_hz, 0.0),
                hz(s.rf_detuning_hz, 0.0),
            );
            let cond = apply_conditions(&config.conditions, coupling_diameter)?;
            // 0 to 1 mV/cm, dense at small fields where the dephasing
            // competition sets the slope (smallest 20% spans 0-15 uV/cm).
            let fields: Vec<f64> = [
                0.0, 2.5e-4, 5e-4, 1e-3, 1.5e-3, 2e-3, 3e-3, 4e-3, 5e-3, 7.5e-3, 1e-2, 1.5e-2,
                2e-2, 3e-2, 4e-2, 5e-2, 6e-2, 7e-2, 8e-2, 9e-2, 1e-1,
            ]
            .to_vec();
            (scheme, cond, (4001, 4.0, 401, 4e6), fields)
        }
        ScenarioKind::Fig4aFwhmVsDensity => {
            let scheme = presets::three_level_eit(
                hz(s.probe_rabi_hz, 1.8e6),
                hz(s.coupling_rabi_hz, 0.5e6),
                hz(s.probe_detuning_hz, 0.0),
                hz(s.coupling_detuning_hz, 0.0),
            );
            let cond = apply_conditions(&config.conditions, 0.12e-3)?;
            (scheme, cond, (4001, 4.0, 321, 6e6), vec![])
        }
        ScenarioKind::Fig6ThreePhoton => {
            let scheme = presets::cs_three_photon(
                hz(s.probe_rabi_hz, 1.8e6),
                hz(s.second_rabi_hz, 1.8e6),
                hz(s.coupling_rabi_hz, 50e3),
                0.0,
                hz(s.probe_detuning_hz, 500e6),
                hz(s.second_detuning_hz, -500e6),
                hz(s.coupling_detuning_hz, -5e3),
                hz(s.rf_detuning_hz, 5e3),
            );
            let mut cc = config.conditions.clone();
            cc.probe_diameter_m = Some(cc.probe_diameter_m.unwrap_or(5e-3));
            let cond = apply_conditions(&cc, 5e-3)?;
            // Splitting-resolved decade plus the weak-field tail.
            let fields = vec![0.09, 0.2, 0.3, 0.45, 0.7, 1.0];
            (scheme, cond, (3001, 4.0, 801, 20e6), fields)
        }
        ScenarioKind::Custom => {
            let scheme = presets::cs_four_level(
                hz(s.probe_rabi_hz, 1.8e6),
                hz(s.coupling_rabi_hz, 0.5e6),
                0.0,
                hz(s.probe_detuning_hz, 0.0),
                hz(s.coupling_detuning_hz, 0.0),
                hz(s.rf_detuning_hz, 0.0),
            );
            let cond = apply_conditions(&config.conditions, 0.12e-3)?;
            (scheme, cond, (2001, 4.0, 401, 6e6), vec![])
        }
    };

    // Budget: figure scenarios default to the reference budget with the
    // transit/collisional entries recomputed where the sweep varies them.
    let overrides = config.budget.to_overrides();
    let budget = match kind {
        ScenarioKind::Fig2bAt | ScenarioKind::Fig3Power | ScenarioKind::Custom => {
            let mut base = fig3_reference_budget();
            if let Some(t) = overrides.transit {
                base.transit = t;
            }
            if let Some(c) = overrides.collisional {
                base.collisional = c;
            }
            if let Some(l) = overrides.laser {
                base.laser = l;
            }
            if let Some(m) = overrides.magnetic {
                base.magnetic = m;
            }
            if let Some(r) = overrides.rydberg_rydberg {
                base.rydberg_rydberg = r;
            }
            if let Some(a) = overrides.assignment.clone() {
                base.assignment = a;
            }
            base
        }
        ScenarioKind::Fig4aFwhmVsDensity => {
            let mut o = overrides.clone();
            o.transit = Some(o.transit.unwrap_or(TAU * 300e3));
            dephasing::assemble_budget(&conditions, &gas, &o)?
        }
        _ => dephasing::assemble_budget(&conditions, &gas, &overrides)?,
    };
    budget.validate()?;

    let numerics = ResolvedNumerics {
        velocity_points: config
            .numerics
            .velocity_points
            .unwrap_or(numerics_default.0),
        velocity_span: config.numerics.velocity_span.unwrap_or(numerics_default.1),
        detuning_points: config
            .numerics
            .detuning_points
            .unwrap_or(numerics_default.2),
        detuning_span_hz: config
            .numerics
            .detuning_span_hz
            .unwrap_or(numerics_default.3),
        doppler_free: config.doppler_free,
    };
    if numerics.detuning_points < 2 {
        return Err(RydError::Config("detuning_points must be >= 2".into()));
    }

    if let Some(sweep) = &config.sweep {
        if sweep.points < 2 {
            return Err(RydError::Config("sweep.points must be >= 2".into()));
        }
        if kind != ScenarioKind::Custom {
            return Err(RydError::Config(
                "sweep is only accepted by the custom scenario".into(),
            ));
        }
    }
    if kind == ScenarioKind::Custom && config.sweep.is_none() {
        return Err(RydError::Config("custom scenario requires a sweep".into()));
    }

    let fields = config.fields_v_per_m.clone().unwrap_or(fields_default);
    if fields.iter().any(|&f| f < 0.0) {
        return Err(RydError::Config("fields must be nonnegative".into()));
    }

    Ok(ResolvedConfig {
        scenario: kind.name().to_string(),
        scheme,
        budget,
        conditions,
        gas,
        rf_transition,
        numerics,
        fields_v_per_m: fields,
        temperatures_k: config
            .temperatures_k
            .clone()
            .unwrap_or_else(|| vec![294.0, 312.0, 330.0]),
        diameters_m: config
            .diameters_m
            .clone()
            .unwrap_or_else(|| vec![0.320e-3, 0.500e-3, 1.100e-3]),
        densities_per_cm3: config
            .densities_per_cm3
            .clone()
            .unwrap_or_else(|| (1..=20).map(|i| i as f64 * 1e10).collect()),
        rabi_pairs_hz: if kind == ScenarioKind::Fig3Power {
            FIG3_RABI_PAIRS_HZ.to_vec()
        } else {
            Vec::new()
        },
        sweep: config.sweep.clone(),
    })
}
