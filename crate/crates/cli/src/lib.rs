//! Scenario runner for the `decohere` models.
//!
//! A scenario is a strict JSON document naming a model (`dephasing`,
//! `collisional` or `gksl`), its parameters, a time grid and output paths.
//! Running it produces a CSV time series and a JSON report of invariant
//! drifts and cross-check residuals.

pub mod app;
pub mod error;
pub mod report;
pub mod run;
pub mod scenario;
pub mod table;

pub use error::{CliError, CliResult};
pub use report::InvariantReport;
pub use run::{check_cp, run_scenario, RunOutput};
pub use scenario::{parse_scenario, Scenario};
