//! Field metrology: AT-splitting inversion, weak-field transmission response,
//! shot-noise limits and minimum detectable field.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::DephasingBudget;
use crate::constants::{HBAR, PLANCK, SPEED_OF_LIGHT};
use crate::error::{Result, RydError};
use crate::scheme::LadderScheme;
use crate::solver;
use crate::spectroscopy::CellConditions;
use crate::velocity::VelocityGrid;

/// The RF transition used for field conversion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RfTransition {
    /// Transition dipole moment, C m.
    pub dipole_moment: f64,
    /// Transition frequency, Hz.
    pub frequency: f64,
}

impl RfTransition {
    /// Cs 52D5/2 <-> 53P3/2: mu = 1745 e a0 at 5.047 GHz.
    pub fn cs_52d52_53p32() -> Self {
        RfTransition {
            dipole_moment: crate::constants::CS_RF_DIPOLE,
            frequency: crate::constants::CS_RF_FREQUENCY,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dipole_moment > 0.0 && self.frequency > 0.0) {
            return Err(RydError::Validation(
                "RF transition dipole and frequency must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// E = h Δν / μ (dipole parallel to the field, Doppler ignored).
pub fn at_splitting_to_field(splitting_hz: f64, transition: &RfTransition) -> Result<f64> {
    transition.validate()?;
    if splitting_hz < 0.0 {
        return Err(RydError::Validation(format!(
            "splitting must be nonnegative, got {splitting_hz}"
        )));
    }
    Ok(PLANCK * splitting_hz / transition.dipole_moment)
}

/// Δν = μ E / h.
pub fn field_to_at_splitting(field: f64, transition: &RfTransition) -> Result<f64> {
    transition.validate()?;
    if field < 0.0 {
        return Err(RydError::Validation(format!(
            "field must be nonnegative, got {field}"
        )));
    }
    Ok(transition.dipole_moment * field / PLANCK)
}

/// Angular RF Rabi frequency μE/ħ for a field amplitude.
pub fn rabi_for_field(field: f64, transition: &RfTransition) -> f64 {
    transition.dipole_moment * field / HBAR
}

/// One point of the weak-field response curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeakFieldPoint {
    /// V/m
    pub field: f64,
    /// 100 (T_RF - T_0) / T_0 at zero probe offset; negative means the RF
    /// field reduces transmission.
    pub delta_t_percent: f64,
}

/// Doppler-averaged on-resonance transmission for the scheme as configured.
fn on_resonance_transmission(
    scheme: &LadderScheme,
    budget: &DephasingBudget,
    conditions: &CellConditions,
    grid: &VelocityGrid,
) -> Result<f64> {
    let relax = solver::build_relaxation(scheme, budget)?;
    let dipole = solver::natural_probe_dipole(scheme)?;
    let (alpha, _) = crate::spectroscopy::averaged_response(
        scheme,
        &relax,
        grid,
        conditions.density,
        dipole,
        0.0,
    )?;
    Ok((-alpha * conditions.length).exp())
}

/// Percent change in on-resonance transmission vs RF field amplitude.
///
/// For each field the RF coupling's Rabi frequency is set to μE/ħ; detunings
/// are taken from the scheme as configured (zero for the on-resonance
/// presets). Field points evaluate in parallel, reduced in input order.
pub fn weak_field_curve(
    scheme: &LadderScheme,
    budget: &DephasingBudget,
    conditions: &CellConditions,
    grid: &VelocityGrid,
    transition: &RfTransition,
    fields: &[f64],
) -> Result<Vec<WeakFieldPoint>> {
    scheme.validate()?;
    transition.validate()?;
    let rf_index = scheme
        .rf_coupling_index()
        .ok_or_else(|| RydError::InvalidScheme("scheme has no RF coupling".into()))?;
    if fields.iter().any(|&f| f < 0.0) {
        return Err(RydError::Validation("negative field amplitude".into()));
    }

    let mut reference = scheme.clone();
    reference.couplings[rf_index].rabi = 0.0;
    let t0 = on_resonance_transmission(&reference, budget, conditions, grid)?;
    if t0 <= 0.0 {
        return Err(RydError::Validation(
            "zero reference transmission: optically thick cell".into(),
        ));
    }

    fields
        .par_iter()
        .map(|&field| {
            if field == 0.0 {
                return Ok(WeakFieldPoint {
                    field,
                    delta_t_percent: 0.0,
                });
            }
            let mut driven = scheme.clone();
            driven.couplings[rf_index].rabi = rabi_for_field(field, transition);
            let t_rf = on_resonance_transmission(&driven, budget, conditions, grid)?;
            Ok(WeakFieldPoint {
                field,
                delta_t_percent: 100.0 * (t_rf - t0) / t0,
            })
        })
        .collect()
}

/// Velocity-averaged on-resonance absorption coefficient (1/m).
fn on_resonance_alpha(
    scheme: &LadderScheme,
    budget: &DephasingBudget,
    conditions: &CellConditions,
    grid: &VelocityGrid,
) -> Result<f64> {
    let relax = solver::build_relaxation(scheme, budget)?;
    let dipole = solver::natural_probe_dipole(scheme)?;
    let (alpha, _) = crate::spectroscopy::averaged_response(
        scheme,
        &relax,
        grid,
        conditions.density,
        dipole,
        0.0,
    )?;
    Ok(alpha)
}

/// Percent change of the lock-in EIT signal vs RF field:
/// 100 (α_0 - α_RF) / (α_off - α_0), where α_off is the coupling-off
/// absorption. This is the demodulated on-resonance response normalized to
/// the EIT signal itself, so it is independent of optical depth and suits
/// density comparisons; signs match `weak_field_curve`.
pub fn eit_signal_curve(
    scheme: &LadderScheme,
    budget: &DephasingBudget,
    conditions: &CellConditions,
    grid: &VelocityGrid,
    transition: &RfTransition,
    fields: &[f64],
) -> Result<Vec<WeakFieldPoint>> {
    scheme.validate()?;
    transition.validate()?;
    let rf_index = scheme
        .rf_coupling_index()
        .ok_or_else(|| RydError::InvalidScheme("scheme has no RF coupling".into()))?;
    if fields.iter().any(|&f| f < 0.0) {
        return Err(RydError::Validation("negative field amplitude".into()));
    }

    let mut reference = scheme.clone();
    reference.couplings[rf_index].rabi = 0.0;
    let alpha_0 = on_resonance_alpha(&reference, budget, conditions, grid)?;
    // Dark reference: the topmost optical coupling (the EIT coupling) off.
    let dark_idx = scheme
        .couplings
        .iter()
        .enumerate()
        .filter(|(_, c)| c.kind == crate::scheme::CouplingKind::Optical)
        .map(|(i, _)| i)
        .max()
        .ok_or_else(|| RydError::InvalidScheme("scheme has no optical coupling".into()))?;
    let mut dark = reference.clone();
    dark.couplings[dark_idx].rabi = 0.0;
    let alpha_off = on_resonance_alpha(&dark, budget, conditions, grid)?;
    let depth = alpha_off - alpha_0;
    if !(depth > 0.0) {
        return Err(RydError::Validation(
            "no EIT signal: coupling-off absorption does not exceed coupling-on".into(),
        ));
    }

    fields
        .par_iter()
        .map(|&field| {
            if field == 0.0 {
                return Ok(WeakFieldPoint {
                    field,
                    delta_t_percent: 0.0,
                });
            }
            let mut driven = scheme.clone();
            driven.couplings[rf_index].rabi = rabi_for_field(field, transition);
            let alpha_rf = on_resonance_alpha(&driven, budget, conditions, grid)?;
            Ok(WeakFieldPoint {
                field,
                delta_t_percent: 100.0 * (alpha_0 - alpha_rf) / depth,
            })
        })
        .collect()
}

/// Least-squares slope of ΔT% vs E over the smallest 20% of the field grid
/// (at least 3 points), %-transmission per (V/m).
pub fn slope_at_zero(curve: &[WeakFieldPoint]) -> Result<f64> {
    if curve.len() < 3 {
        return Err(RydError::Validation(format!(
            "slope needs at least 3 points, got {}",
            curve.len()
        )));
    }
    let mut sorted: Vec<&WeakFieldPoint> = curve.iter().collect();
    sorted.sort_by(|a, b| a.field.partial_cmp(&b.field).unwrap());
    let count = ((curve.len() as f64 * 0.2).ceil() as usize).max(3);
    let pts = &sorted[..count.min(sorted.len())];

    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.field).sum();
    let sy: f64 = pts.iter().map(|p| p.delta_t_percent).sum();
    let sxx: f64 = pts.iter().map(|p| p.field * p.field).sum();
    let sxy: f64 = pts.iter().map(|p| p.field * p.delta_t_percent).sum();
    let denom = n * sxx - sx * sx;
    if denom == 0.0 {
        return Err(RydError::Validation(
            "degenerate field grid for slope fit".into(),
        ));
    }
    Ok((n * sxy - sx * sy) / denom)
}

/// Projection-noise limit E_min/√Hz = h / (μ √(T₂ N)).
pub fn atom_shot_noise_limit(n_atoms: f64, t2: f64, transition: &RfTransition) -> Result<f64> {
    transition.validate()?;
    if !(n_atoms > 0.0 && t2 > 0.0) {
        return Err(RydError::Validation(
            "atom number and T2 must be positive".into(),
        ));
    }
    Ok(PLANCK / (transition.dipole_moment * (t2 * n_atoms).sqrt()))
}

/// Photon-counting shot-noise SNR √(η P / (2 h ν Δf)).
pub fn photon_shot_noise_snr(
    power: f64,
    quantum_efficiency: f64,
    bandwidth: f64,
    wavelength: f64,
) -> Result<f64> {
    if !(power > 0.0 && bandwidth > 0.0 && wavelength > 0.0) {
        return Err(RydError::Validation(
            "power, bandwidth and wavelength must be positive".into(),
        ));
    }
    if !(quantum_efficiency > 0.0 && quantum_efficiency <= 1.0) {
        return Err(RydError::Validation(format!(
            "quantum efficiency must be in (0, 1], got {quantum_efficiency}"
        )));
    }
    let nu = SPEED_OF_LIGHT / wavelength;
    Ok((quantum_efficiency * power / (2.0 * PLANCK * nu * bandwidth)).sqrt())
}

/// The overall EIT signal is ~0.1% of the absorption signal; the response
/// curves are normalized to the lock-in EIT signal, so the photon floor on
/// the detected power divides by this fraction.
pub const EIT_SIGNAL_FRACTION: f64 = 1e-3;

/// Fraction of the detected probe power that the absorption signal
/// represents at the sensitivity operating point; the second stage of the
/// contrast chain linking absorption-signal units to detected power.
pub const ABSORPTION_FRACTION: f64 = 0.1;

/// Detection noise floor in the %-units of `weak_field_curve`, per √Hz:
/// the photon-counting floor of the detected power referred to the lock-in
/// EIT signal through the contrast chain.
pub fn noise_floor_percent(photon_snr: f64, eit_signal_fraction: f64) -> Result<f64> {
    if !(photon_snr > 0.0 && eit_signal_fraction > 0.0 && eit_signal_fraction <= 1.0) {
        return Err(RydError::Validation(
            "photon SNR must be positive and the EIT fraction in (0, 1]".into(),
        ));
    }
    Ok(100.0 / (photon_snr * eit_signal_fraction))
}

/// Field at which |ΔT%| reaches the noise floor: E_min = floor / |slope|,
/// V m⁻¹ Hz^(-1/2) for a floor in %-transmission per √Hz.
pub fn min_detectable_field(curve: &[WeakFieldPoint], noise_floor_percent: f64) -> Result<f64> {
    if !(noise_floor_percent > 0.0) {
        return Err(RydError::Validation("noise floor must be positive".into()));
    }
    let slope = slope_at_zero(curve)?;
    if slope == 0.0 {
        return Err(RydError::UnmeasurableField);
    }
    Ok(noise_floor_percent / slope.abs())
}

/// Sensitivity summary for one operating point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SensitivityReport {
    /// %-transmission per (V/m)
    pub slope_at_zero: f64,
    /// V m⁻¹ Hz^(-1/2)
    pub min_detectable_field: f64,
    /// V m⁻¹ Hz^(-1/2)
    pub atom_shot_limit: f64,
    pub photon_snr: f64,
    /// Fully resolved inputs behind the numbers.
    pub config: serde_json::Value,
}
