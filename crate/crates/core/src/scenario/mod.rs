//! Scenario files, their execution, and the derived reports.

pub mod arrivals;
pub mod config;
pub mod dominance;
pub mod emit;
pub mod run;

pub use arrivals::{arrival_times, linear_fit, DEFAULT_THRESHOLD};
pub use config::ScenarioConfig;
pub use dominance::{verify_dominance, DominanceReport, DOMINANCE_SLACK};
pub use emit::{emit_outputs, grid_file_name};
pub use run::{run_scenario, write_outputs, RunMode, RunOutput};
