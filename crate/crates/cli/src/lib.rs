//! Scenario files, CSV and SVG writers, and the `irslink` command line.

pub mod commands;
pub mod csv;
pub mod format;
pub mod output;
pub mod plot;
pub mod scenario;

pub use commands::{run, Cli, CliError};
pub use scenario::{parse_scenario, ScenarioError, ScenarioFile};
