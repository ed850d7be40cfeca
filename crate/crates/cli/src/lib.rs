//! Library side of the `gvf` command-line tool: scenario files, the
//! subcommands, and the exit-code contract.

pub mod commands;
pub mod error;
pub mod scenario_file;

pub use commands::{
    cmd_compare, cmd_run, cmd_singular_map, cmd_verify, load_scenario, CompareSummary, GlobalOptions, RunSummary,
    SingularMapArgs, SingularMapSummary,
};
pub use error::{exit, CliError, CliResult};
pub use scenario_file::{ControllerKind, ScenarioFile, SimMode};
