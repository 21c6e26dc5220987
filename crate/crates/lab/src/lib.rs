//! Configuration, report files and the command-line driver for the
//! `poissonlab-core` experiments.

pub mod config;
pub mod report;
pub mod run;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },
    #[error("cannot access {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] poissonlab_core::Error),
}

impl LabError {
    /// Exit code for configuration and resource failures.
    pub const EXIT_CODE: i32 = 2;
}
