//! Benchmark harness for the sparse recovery library: reconstruction
//! metrics, seeded experiment sweeps over measurement counts, and CSV/JSON
//! report emission. The `cs-bench` binary is a thin CLI over this crate.

pub mod config;
pub mod experiment;
pub mod metrics;
pub mod report;

/// Harness-level failures, split by how the CLI should exit: bad
/// configuration is the caller's problem (exit 1), failing to read or
/// write a file is the environment's (exit 2).
#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl From<cs_recovery::Error> for BenchError {
    fn from(e: cs_recovery::Error) -> Self {
        BenchError::Config(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, BenchError>;
