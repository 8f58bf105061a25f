//! Scenario-driven front end: parse a scenario, run its pipeline, write tables.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod output;
pub mod report;
pub mod run;

pub use config::{Pipeline, ScenarioConfig};
pub use error::CliError;
pub use output::{emit_tables, Outputs};
pub use report::Report;
pub use run::run_scenario;
