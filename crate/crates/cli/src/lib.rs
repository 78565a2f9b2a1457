//! Experiment runner for the sharp ground-energy bound: single evaluations,
//! sweeps written as CSV, and seeded verification suites.

pub mod config;
pub mod run;
pub mod verify;

pub use config::{ExperimentConfig, PotentialSpec};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] sharpbound::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 3,
            CliError::Verification(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Numerical(_) => "numerical",
            CliError::Io(_) => "io",
            CliError::Verification(_) => "verification",
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
