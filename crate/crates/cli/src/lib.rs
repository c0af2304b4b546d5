//! Command-line front end: configuration, CSV formatting and the subcommands.

pub mod commands;
pub mod config;
pub mod format;
