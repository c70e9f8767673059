//! Rydberg-atom EIT RF electrometry simulator.
//!
//! Models the steady state of driven N-level ladder systems in a thermal Cs
//! vapor: rotating-frame Hamiltonians with Doppler shifts, Lindblad
//! relaxation with a physical dephasing budget, velocity-averaged probe
//! transmission spectra, Autler-Townes field metrology, Mach-Zehnder homodyne
//! readout, and shot-noise sensitivity estimators. The `scenario` module runs
//! the named figure-reproduction scenarios behind the CLI.

pub mod budget;
pub mod constants;
pub mod dephasing;
pub mod error;
pub mod mzi;
pub mod presets;
pub mod scenario;
pub mod scheme;
pub mod sensing;
pub mod solver;
pub mod spectroscopy;
pub mod velocity;

pub use budget::{Assignment, CoherenceAssignment, DephasingBudget, DephasingChannel};
pub use error::{Result, RydError};
pub use scheme::{Coupling, CouplingKind, LadderScheme, Level};
pub use sensing::{RfTransition, SensitivityReport, WeakFieldPoint};
pub use solver::{
    build_hamiltonian, build_relaxation, probe_absorption, steady_state, SteadyState,
};
pub use spectroscopy::{CellConditions, SpectralTrace};
pub use velocity::{make_velocity_grid, VelocityGrid};
