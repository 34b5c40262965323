//! Semilinear time integration on a radial or a small Cartesian grid.

pub mod grid;
pub mod nonlinear;
pub mod output;
pub mod run;

pub use grid::{CartesianGrid, RadialGrid};
pub use output::{read_field_dump, read_series_csv, write_field_dump, write_snapshots_csv, DumpGrid, SeriesRow};
pub use nonlinear::{evaluate_nonlinearity, CompiledSystem, GridRef};
pub use run::{
    discrete_energy, initial_state, run_from, run_simulation, step_leapfrog, ComponentData, ComponentStats, FieldState,
    InitialData, Mode, Profile, SimulationResult, Simulator, Snapshot, SolverConfig,
};

use crate::system_model::VarRef;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError {
    #[error("unsupported variable {var}: {reason}")]
    Unsupported { var: VarRef, reason: String },
    #[error("equation {equation} is not rotation invariant on radial data")]
    NotRadial { equation: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
