//! Command-line front end: the form language, connection files, JSON
//! reports and subcommand dispatch.

pub mod app;
pub mod config;
pub mod dsl;
pub mod reports;

pub use app::{run, run_with};
