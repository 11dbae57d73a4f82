//! Batch front-end for the `sdym` toolkit: JSON configuration in, canonical
//! JSON or CSV reports out.

pub mod commands;
pub mod config;
pub mod report;

pub use commands::{run, Command};
pub use config::RunConfig;
pub use report::{emit, Format, Report};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit code: 2 for usage and configuration problems.
    pub fn exit_code(&self) -> u8 {
        2
    }
}
