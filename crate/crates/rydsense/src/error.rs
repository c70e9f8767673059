use thiserror::Error;

/// Errors surfaced by the simulator.
#[derive(Debug, Error)]
pub enum RydError {
    /// The coupling graph does not form a connected ladder, or indices are
    /// out of range.
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),

    /// A rate that must be nonnegative was negative, or similar.
    #[error("invalid rate `{name}`: {value}")]
    InvalidRate { name: &'static str, value: f64 },

    #[error("validation failed: {0}")]
    Validation(String),

    /// The Liouvillian kernel is not one-dimensional (e.g. a decoupled level
    /// with no decay) or the solve did not produce a physical steady state.
    #[error("degenerate steady state: {0}")]
    DegenerateSteadyState(String),

    /// Probe Rabi frequency is zero; the absorption normalization divides by it.
    #[error("probe Rabi frequency is zero")]
    ZeroProbeRabi,

    /// No peak rises above the baseline noise floor.
    #[error("no peak above the baseline")]
    NoPeak,

    /// The Autler-Townes doublet is not resolved (weak-field regime).
    #[error("unresolved Autler-Townes splitting")]
    UnresolvedSplitting,

    #[error("temperature {0} K outside the 250-400 K validity range")]
    TemperatureRange(f64),

    /// Both noise channels are zero; the SNR comparison is undefined.
    #[error("undefined SNR: all noise terms are zero")]
    UndefinedSnr,

    /// The response slope at zero field vanishes.
    #[error("zero slope: field is unmeasurable")]
    UnmeasurableField,

    /// A solver failure annotated with the sweep point where it occurred.
    #[error("solver failed at detuning {detuning} rad/s, velocity {velocity} m/s: {source}")]
    SolverAt {
        detuning: f64,
        velocity: f64,
        #[source]
        source: Box<RydError>,
    },

    /// Scenario configuration problems (unknown keys, bad values).
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl RydError {
    pub(crate) fn at(self, detuning: f64, velocity: f64) -> RydError {
        RydError::SolverAt {
            detuning,
            velocity,
            source: Box::new(self),
        }
    }

    /// True for errors caused by user configuration rather than the solver.
    pub fn is_config(&self) -> bool {
        matches!(self, RydError::Config(_))
    }
}

pub type Result<T> = std::result::Result<T, RydError>;
