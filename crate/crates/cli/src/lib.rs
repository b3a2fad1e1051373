//! Command-line and HTTP front end for the composition analyzer.
//!
//! Commands: `analyze`, `score`, `stats`, `serve` and `cache`. Each takes
//! its settings from a [`Config`](config::Config): a JSON file given with
//! `--config`, overridden by flags of the same names.

pub mod analyze;
pub mod config;
pub mod engine;
pub mod error;
pub mod score;
pub mod service;
pub mod stats;

pub use config::{Config, PartialConfig};
pub use engine::Engine;
pub use error::CliError;
