//! Doppler-averaged probe-transmission spectra and lineshape analysis.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::budget::DephasingBudget;
use crate::constants::TAU;
use crate::error::{Result, RydError};
use crate::scheme::LadderScheme;
use crate::solver::{self, build_hamiltonian, steady_state};
use crate::velocity::VelocityGrid;

/// Vapor cell and beam geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellConditions {
    /// K
    pub temperature: f64,
    /// m^-3
    pub density: f64,
    /// m ("A 4 cm long vapor cell")
    pub length: f64,
    /// m
    pub probe_diameter: f64,
    /// m
    pub coupling_diameter: f64,
}

impl CellConditions {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("temperature", self.temperature),
            ("density", self.density),
            ("length", self.length),
            ("probe_diameter", self.probe_diameter),
            ("coupling_diameter", self.coupling_diameter),
        ] {
            if !(v > 0.0) {
                return Err(RydError::Validation(format!(
                    "cell condition `{name}` must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

impl Default for CellConditions {
    fn default() -> Self {
        CellConditions {
            temperature: 294.0,
            density: 3.1e16,
            length: 0.04,
            probe_diameter: 1.36e-3,
            coupling_diameter: 0.12e-3,
        }
    }
}

/// Probe transmission vs detuning, with the accumulated dispersive phase of
/// the transmitted field (used by the interferometer model).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralTrace {
    /// Probe detuning offsets, rad/s, strictly increasing.
    pub detunings: Vec<f64>,
    /// Transmission fraction in [0, 1].
    pub transmission: Vec<f64>,
    /// arg(t) of the transmitted field amplitude, rad.
    pub phase: Vec<f64>,
    pub metadata: serde_json::Value,
}

impl SpectralTrace {
    pub fn validate(&self) -> Result<()> {
        if self.detunings.len() != self.transmission.len()
            || self.detunings.len() != self.phase.len()
            || self.detunings.len() < 2
        {
            return Err(RydError::Validation("trace grid length mismatch".into()));
        }
        if self.detunings.windows(2).any(|w| w[1] <= w[0]) {
            return Err(RydError::Validation(
                "trace detuning grid must be strictly increasing".into(),
            ));
        }
        if self.transmission.iter().any(|&t| !(0.0..=1.0).contains(&t)) {
            return Err(RydError::Validation("transmission outside [0, 1]".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.detunings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.detunings.is_empty()
    }
}

/// Velocity-averaged probe absorption and dispersion (1/m) at one probe
/// detuning offset. The average runs over the grid in fixed order.
pub fn averaged_response(
    scheme: &LadderScheme,
    relax: &solver::Relaxation,
    grid: &VelocityGrid,
    density: f64,
    dipole: f64,
    probe_offset: f64,
) -> Result<(f64, f64)> {
    let mut shifted = scheme.clone();
    shifted.couplings[scheme.probe_index].detuning += probe_offset;
    let mut alpha = 0.0;
    let mut dispersion = 0.0;
    for (&v, &w) in grid.nodes.iter().zip(&grid.weights) {
        let h = build_hamiltonian(&shifted, v).map_err(|e| e.at(probe_offset, v))?;
        let ss = steady_state(&h, relax).map_err(|e| e.at(probe_offset, v))?;
        let (a, d) = solver::probe_response(&ss, &shifted, density, dipole)
            .map_err(|e| e.at(probe_offset, v))?;
        alpha += w * a;
        dispersion += w * d;
    }
    Ok((alpha, dispersion))
}

/// Doppler-averaged transmission spectrum over `detunings` (offsets added to
/// the scheme's probe detuning). The absorption coefficient is averaged over
/// velocity classes, then exponentiated once: each class is an independent
/// absorber population along the full path. Detuning points are evaluated in
/// parallel and reduced in grid order.
pub fn doppler_averaged_trace(
    scheme: &LadderScheme,
    budget: &DephasingBudget,
    conditions: &CellConditions,
    grid: &VelocityGrid,
    detunings: &[f64],
) -> Result<SpectralTrace> {
    scheme.validate()?;
    conditions.validate()?;
    grid.validate()?;
    if detunings.len() < 2 || detunings.windows(2).any(|w| w[1] <= w[0]) {
        return Err(RydError::Validation(
            "detuning grid must be strictly increasing with >= 2 points".into(),
        ));
    }
    let relax = solver::build_relaxation(scheme, budget)?;
    let dipole = solver::natural_probe_dipole(scheme)?;

    let points: Result<Vec<(f64, f64)>> = detunings
        .par_iter()
        .map(|&delta| averaged_response(scheme, &relax, grid, conditions.density, dipole, delta))
        .collect();
    let points = points?;

    let mut transmission = Vec::with_capacity(points.len());
    let mut phase = Vec::with_capacity(points.len());
    for (alpha, disp) in points {
        let t = (-alpha * conditions.length).exp();
        if t > 1.0 + 1e-6 {
            return Err(RydError::Validation(format!(
                "transmission {t} above unity: negative averaged absorption"
            )));
        }
        transmission.push(t.clamp(0.0, 1.0));
        // n = 1 + chi/2: phase relative to vacuum, with chi' ~ dispersion/k.
        phase.push(disp * conditions.length / 2.0);
    }

    let trace = SpectralTrace {
        detunings: detunings.to_vec(),
        transmission,
        phase,
        metadata: json!({
            "temperature_k": conditions.temperature,
            "density_m3": conditions.density,
            "length_m": conditions.length,
            "velocity_points": grid.len(),
            "probe_rabi_rad_s": scheme.probe().rabi,
            "levels": scheme.levels.iter().map(|l| l.label.clone()).collect::<Vec<_>>(),
        }),
    };
    trace.validate()?;
    Ok(trace)
}

/// Median of the outer 10% of samples (5% from each end); robust baseline.
pub(crate) fn baseline(values: &[f64]) -> f64 {
    let n = values.len();
    let k = (n / 20).max(1);
    let mut outer: Vec<f64> = values[..k]
        .iter()
        .chain(&values[n - k..])
        .cloned()
        .collect();
    outer.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = outer.len();
    if m % 2 == 1 {
        outer[m / 2]
    } else {
        0.5 * (outer[m / 2 - 1] + outer[m / 2])
    }
}

/// Full width at half maximum (Hz) of the dominant peak above baseline,
/// using linear interpolation at the half level.
pub fn fwhm(trace: &SpectralTrace) -> Result<f64> {
    trace.validate()?;
    let t = &trace.transmission;
    let base = baseline(t);
    let (peak_idx, &peak) = t
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .expect("validated trace is nonempty");
    let signal = peak - base;
    let range = t.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - t.iter().cloned().fold(f64::INFINITY, f64::min);
    if range <= 0.0 || signal < 0.5 * range {
        return Err(RydError::NoPeak);
    }
    let half = base + signal / 2.0;

    let x = &trace.detunings;
    let mut left = None;
    for i in (1..=peak_idx).rev() {
        if t[i - 1] <= half && t[i] >= half {
            let f = (half - t[i - 1]) / (t[i] - t[i - 1]);
            left = Some(x[i - 1] + f * (x[i] - x[i - 1]));
            break;
        }
    }
    let mut right = None;
    for i in peak_idx..t.len() - 1 {
        if t[i] >= half && t[i + 1] <= half {
            let f = (t[i] - half) / (t[i] - t[i + 1]);
            right = Some(x[i] + f * (x[i + 1] - x[i]));
            break;
        }
    }
    match (left, right) {
        (Some(l), Some(r)) => Ok((r - l) / TAU),
        _ => Err(RydError::NoPeak),
    }
}

/// Quadratic-interpolated position and height of the local maximum at `i`.
fn refine_peak(x: &[f64], y: &[f64], i: usize) -> (f64, f64) {
    if i == 0 || i + 1 >= y.len() {
        return (x[i], y[i]);
    }
    let (y0, y1, y2) = (y[i - 1], y[i], y[i + 1]);
    let denom = y0 - 2.0 * y1 + y2;
    if denom == 0.0 {
        return (x[i], y[i]);
    }
    let delta = 0.5 * (y0 - y2) / denom;
    let h = x[i + 1] - x[i];
    (x[i] + delta * h, y1 - 0.25 * (y0 - y2) * delta)
}

/// Positions (rad/s) of the two Autler-Townes peaks and their splitting (Hz).
///
/// The two tallest interior local maxima qualify when the valley between them
/// dips at least `depth_frac` of the smaller peak's height above the trace
/// minimum; otherwise the doublet is unresolved (weak-field regime).
pub fn find_at_peaks_with(trace: &SpectralTrace, depth_frac: f64) -> Result<(f64, f64, f64)> {
    trace.validate()?;
    let t = &trace.transmission;
    let x = &trace.detunings;
    let n = t.len();
    let mut maxima: Vec<usize> = Vec::new();
    for i in 1..n - 1 {
        if t[i] > t[i - 1] && t[i] >= t[i + 1] {
            maxima.push(i);
        }
    }
    if maxima.len() < 2 {
        return Err(RydError::UnresolvedSplitting);
    }
    maxima.sort_by(|&a, &b| t[b].partial_cmp(&t[a]).unwrap());
    let (mut i1, mut i2) = (maxima[0], maxima[1]);
    if i1 > i2 {
        std::mem::swap(&mut i1, &mut i2);
    }
    let valley = t[i1..=i2].iter().cloned().fold(f64::INFINITY, f64::min);
    let smaller = t[i1].min(t[i2]);
    let floor = t.iter().cloned().fold(f64::INFINITY, f64::min);
    if smaller - floor <= 0.0 || smaller - valley < depth_frac * (smaller - floor) {
        return Err(RydError::UnresolvedSplitting);
    }
    let (p1, _) = refine_peak(x, t, i1);
    let (p2, _) = refine_peak(x, t, i2);
    Ok((p1, p2, (p2 - p1).abs() / TAU))
}

/// `find_at_peaks_with` at the default 5% valley depth.
pub fn find_at_peaks(trace: &SpectralTrace) -> Result<(f64, f64, f64)> {
    find_at_peaks_with(trace, 0.05)
}
