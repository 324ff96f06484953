//! Command-line harness: instance files, suites and reports.

pub mod app;
pub mod config;
pub mod suites;
