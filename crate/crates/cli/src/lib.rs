//! Front end for `qvl-core`: the quiver DSL, JSON files for representations,
//! maps and cocycles, and the `qvl` subcommands.

pub mod commands;
pub mod dsl;
pub mod json;

pub use commands::{run_command, ExitCode, Outcome};
pub use dsl::{parse_quiver_spec, print_quiver_spec, DslError, QuiverSpec};
