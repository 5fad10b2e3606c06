//! File formats, parallel Bayes factors and the command-line front end for
//! [`orderflow_core`].

pub mod cli;
pub mod error;
pub mod export;
pub mod json;
pub mod parallel;

pub use error::CliError;
pub use parallel::bayes_factor_parallel;
