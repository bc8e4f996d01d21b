//! Command-line front end and file formats for `qform-core`.

pub mod cli;
pub mod config;
pub mod report;
