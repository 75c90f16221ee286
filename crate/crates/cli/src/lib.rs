//! Command-line front end for [`uqcm`]: amplitude tables, the cloning
//! channel on JSON operators, closed-form tables and verification suites.

pub mod commands;
pub mod error;
pub mod report;
pub mod suites;

pub use error::CliError;
pub use report::{CaseParams, CaseResult, RunReport, Status};
pub use suites::{run, Suite, VerifyConfig};
