//! Scenario front end: `run` executes a JSON config, `list-scenarios` and
//! `show-config` inspect the presets.
//!
//! Exit codes: 0 success, 2 configuration error, 3 solver error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rydsense::scenario::{self, ScenarioConfig, ScenarioKind};
use rydsense::RydError;

#[derive(Parser)]
#[command(
    name = "rydsense",
    version,
    about = "Rydberg EIT RF electrometry scenario runner"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario from a JSON config and write CSV/JSON outputs.
    Run {
        /// Path to the scenario config JSON.
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path (defaults to ./<scenario>.csv).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (falls back to RYDSENSE_THREADS, then all cores).
        #[arg(long)]
        threads: Option<usize>,
        /// Restrict the velocity grid to v = 0.
        #[arg(long)]
        doppler_free: bool,
    },
    /// List the built-in scenarios.
    ListScenarios,
    /// Print a scenario's fully resolved default configuration as JSON.
    ShowConfig {
        /// Scenario name, e.g. fig3_power.
        #[arg(long)]
        scenario: String,
    },
}

const EXIT_CONFIG: u8 = 2;
const EXIT_SOLVER: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn config(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    fn solver(err: RydError) -> Self {
        CliError {
            code: if err.is_config() {
                EXIT_CONFIG
            } else {
                EXIT_SOLVER
            },
            message: err.to_string(),
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            config,
            out,
            threads,
            doppler_free,
        } => run(config, out, threads, doppler_free),
        Command::ListScenarios => {
            for kind in ScenarioKind::ALL {
                println!("{:24} {}", kind.name(), kind.summary());
            }
            Ok(())
        }
        Command::ShowConfig { scenario } => {
            let kind = parse_scenario(&scenario)?;
            let resolved =
                scenario::resolve(&ScenarioConfig::preset(kind)).map_err(CliError::solver)?;
            let json = serde_json::to_string_pretty(&resolved)
                .map_err(|e| CliError::config(e.to_string()))?;
            println!("{json}");
            Ok(())
        }
    }
}

fn parse_scenario(name: &str) -> Result<ScenarioKind, CliError> {
    ScenarioKind::ALL
        .into_iter()
        .find(|k| k.name() == name)
        .ok_or_else(|| {
            CliError::config(format!(
                "unknown scenario `{name}`; available: {}",
                ScenarioKind::ALL
                    .iter()
                    .map(|k| k.name())
                    .collect::<Vec<_>>()
                    .join(", ")
            ))
        })
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    if let Some(n) = flag {
        return Ok(Some(n));
    }
    match std::env::var("RYDSENSE_THREADS") {
        Ok(v) => {
            let n: usize = v
                .parse()
                .map_err(|_| CliError::config(format!("RYDSENSE_THREADS=`{v}` is not a number")))?;
            Ok(Some(n))
        }
        Err(_) => Ok(None),
    }
}

fn run(
    config_path: PathBuf,
    out: Option<PathBuf>,
    threads: Option<usize>,
    doppler_free: bool,
) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&config_path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", config_path.display())))?;
    let mut config =
        ScenarioConfig::from_json(&text).map_err(|e| CliError::config(e.to_string()))?;
    if doppler_free {
        config.doppler_free = true;
    }

    let run_inner = || {
        let output = scenario::run_scenario(&config)?;
        let out_path = out
            .clone()
            .unwrap_or_else(|| PathBuf::from(format!("{}.csv", output.name)));
        let written = scenario::write_output(&output, &out_path)?;
        Ok::<_, RydError>((output, written))
    };

    let (output, written) = match thread_count(threads)? {
        Some(n) => {
            if n == 0 {
                return Err(CliError::config("thread count must be positive"));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::config(e.to_string()))?;
            pool.install(run_inner).map_err(CliError::solver)?
        }
        None => run_inner().map_err(CliError::solver)?,
    };

    eprintln!(
        "scenario {} done (config_hash={})",
        output.name, output.config_hash
    );
    for path in written {
        eprintln!("  wrote {}", path.display());
    }
    Ok(())
}
