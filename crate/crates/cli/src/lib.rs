//! Config-driven front end for the spectral Burgers solver and estimates lab.
//!
//! The library half of the CLI exposes config parsing, CSV serialization,
//! manifest handling, and subcommand runners so integration tests can drive
//! the exact code paths used by the binary.

pub mod config;
pub mod csv_out;
pub mod manifest;
pub mod runner;

pub use config::{ConfigError, RunConfig};
pub use manifest::{sha256_hex, RunManifest};
pub use runner::{run, Outcome, Subcommand};
