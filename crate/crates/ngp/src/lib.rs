//! Files, reports and the command line for `ngp-core`.

pub mod cache;
pub mod cli;
pub mod error;
pub mod json;
pub mod report;
pub mod sample;
pub mod suite;

pub use error::{CliError, CliResult};
