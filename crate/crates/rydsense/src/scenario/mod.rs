//! Named figure-reproduction scenarios, parameter sweeps, and their CSV/JSON
//! emission.

mod config;
mod output;
mod run;

pub use config::{
    fig3_reference_budget, resolve, BudgetConfig, ConditionsConfig, NumericsConfig, ResolvedConfig,
    ResolvedNumerics, ScenarioConfig, ScenarioKind, SchemeOverrides, SweepConfig,
    FIG3_RABI_PAIRS_HZ,
};
pub use output::{config_hash, emit_csv, render_csv, write_atomic, Table};
pub use run::{run_scenario, run_three_photon, ScenarioOutput};

use crate::error::Result;
use std::path::{Path, PathBuf};

/// Write a scenario's tables plus the resolved-config sidecar and JSON report.
///
/// A single table lands at `out` directly; multiple tables insert `_<id>`
/// before the extension. The sidecar is `<out stem>.config.json` and the
/// report `<out stem>.report.json`. Returns the paths written.
pub fn write_output(output: &ScenarioOutput, out: &Path) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| output.name.clone());
    let ext = out
        .extension()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".to_string());
    let dir = out.parent().map(Path::to_path_buf).unwrap_or_default();

    if output.tables.len() == 1 {
        emit_csv(&output.tables[0], &output.name, &output.config_hash, out)?;
        written.push(out.to_path_buf());
    } else {
        for table in &output.tables {
            let path = dir.join(format!("{stem}_{}.{ext}", table.id));
            emit_csv(table, &output.name, &output.config_hash, &path)?;
            written.push(path);
        }
    }

    let sidecar = dir.join(format!("{stem}.config.json"));
    let config_json = serde_json::to_string_pretty(&output.resolved)
        .map_err(|e| crate::error::RydError::Config(e.to_string()))?;
    write_atomic(&sidecar, &config_json)?;
    written.push(sidecar);

    let report_path = dir.join(format!("{stem}.report.json"));
    let report_json = serde_json::to_string_pretty(&output.report)
        .map_err(|e| crate::error::RydError::Config(e.to_string()))?;
    write_atomic(&report_path, &report_json)?;
    written.push(report_path);

    Ok(written)
}
