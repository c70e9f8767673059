//! Result tables and their CSV/JSON emission.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Result, RydError};

use super::config::ResolvedConfig;

/// A rectangular numeric result table. Column names carry units in
/// parentheses, e.g. "density (cm^-3)".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    /// Suffix used when a scenario emits more than one table.
    pub id: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(id: &str, columns: Vec<String>) -> Self {
        Table {
            id: id.to_string(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// FNV-1a 64-bit over the canonical resolved-config JSON; stable across runs
/// and thread counts.
pub fn config_hash(resolved: &ResolvedConfig) -> String {
    let json = serde_json::to_string(resolved).expect("resolved config serializes");
    let mut hash: u64 = 0xcbf29ce484222325;
    for byte in json.as_bytes() {
        hash ^= *byte as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("{hash:016x}")
}

fn format_value(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else {
        // Shortest round-trip decimal.
        format!("{v}")
    }
}

/// Render a table to the CSV layout:
/// `# rydsense scenario=<name> version=<semver> config_hash=<hex>`, a header
/// row, then data rows in sweep order. LF endings.
pub fn render_csv(table: &Table, scenario: &str, hash: &str) -> Result<String> {
    if table.rows.is_empty() {
        return Err(RydError::Validation(format!(
            "table `{}` is empty; refusing to write",
            table.id
        )));
    }
    let mut out = String::new();
    out.push_str(&format!(
        "# rydsense scenario={scenario} version={} config_hash={hash}\n",
        env!("CARGO_PKG_VERSION")
    ));
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|&v| format_value(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Atomic write: temp file in the target directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let tmp: PathBuf = match dir {
        Some(d) => {
            fs::create_dir_all(d)?;
            d.join(format!(
                ".{}.tmp",
                path.file_name().unwrap_or_default().to_string_lossy()
            ))
        }
        None => PathBuf::from(format!(
            ".{}.tmp",
            path.file_name().unwrap_or_default().to_string_lossy()
        )),
    };
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Write a table's CSV at `path` (empty tables are an error, no file is
/// created).
pub fn emit_csv(table: &Table, scenario: &str, hash: &str, path: &Path) -> Result<()> {
    let csv = render_csv(table, scenario, hash)?;
    write_atomic(path, &csv)
}
