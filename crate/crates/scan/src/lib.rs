//! Scans, certificates and regression diffs on top of `biorth-core`.
//!
//! Every command takes a [`ScanConfig`] and an executor and returns a
//! [`Certificate`]. Certificates are deterministic: the same config gives
//! the same bytes for any number of workers.

pub mod certificate;
pub mod commands;
pub mod config;
pub mod diff;
pub mod exec;

pub use certificate::{Certificate, Check, CheckKind};
pub use commands::{cmd_deform_reuse, cmd_deform_verify, cmd_wilking_scan, cmd_wu_verify, load_atlas, save_atlas};
pub use config::{ScanConfig, Space, SCHEMA_VERSION};
pub use diff::{cmd_diff, DiffReport, DiffTolerances, Drift, DriftClass};
pub use exec::RayonExecutor;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Pass = 0,
    Internal = 1,
    Numeric = 2,
    Resolution = 3,
    Config = 4,
}

#[derive(Debug, thiserror::Error)]
pub enum ScanError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("schema version {got} does not match {expected}")]
    Schema { expected: u32, got: u32 },
    #[error("{0}: {1}")]
    Io(String, String),
    #[error(transparent)]
    Core(#[from] biorth_core::Error),
}

impl ScanError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            ScanError::Config(_) | ScanError::Schema { .. } | ScanError::Io(..) => ExitCode::Config,
            ScanError::Core(biorth_core::Error::InsufficientResolution { .. }) => ExitCode::Resolution,
            ScanError::Core(_) => ExitCode::Numeric,
        }
    }
}
