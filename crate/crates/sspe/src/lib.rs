//! File formats, command line and reproduction scenarios on top of
//! `sspe-core`.

pub mod cli;
pub mod config;
pub mod error;
pub mod io;
pub mod provenance;
pub mod scenario;

pub use config::CliConfig;
pub use error::{CliError, Result};
pub use scenario::{run_scenario, ScenarioReport, SCENARIOS};
