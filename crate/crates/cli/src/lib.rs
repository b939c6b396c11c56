//! Batch driver for the `qlgas` simulator: configuration, unitary files, CSV
//! series, diffusion fits and the subcommand bodies behind the `qlgas`
//! binary.

pub mod commands;
pub mod config;
mod error;
pub mod fit;
pub mod series;
pub mod unitary_file;

pub use error::{CliError, Result};
