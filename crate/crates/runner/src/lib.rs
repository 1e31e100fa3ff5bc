//! Configuration, presets, simulation driver and convergence sweeps behind
//! the `erpic` command.

pub mod config;
pub mod converge;
pub mod preset;
pub mod run;

pub use config::{parse_config, ConfigErrors, SimulationConfig};
pub use converge::{run_convergence, ConvergenceSpec, ConvergenceTable, ReferenceCache};
pub use preset::{preset, Scale};
pub use run::{run_simulation, RunError, RunOutcome};

/// Worker threads requested through `ERPIC_THREADS` (default 1).
pub fn threads_from_env() -> usize {
    std::env::var("ERPIC_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(1)
}
