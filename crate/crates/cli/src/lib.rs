//! Command-line harness: configuration, SVG figures and subcommands.

pub mod commands;
pub mod config;
pub mod plot;

pub use commands::{cmd_focused, cmd_oracle, cmd_report, cmd_simulate, cmd_sweep, Outcome};
pub use config::{ConfigError, RunConfig, Variant};
