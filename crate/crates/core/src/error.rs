use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("unknown platform '{0}' (expected twitter, facebook, news, blog or alt_score)")]
    UnknownPlatform(String),

    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    #[error("sample value {0} is outside the support k >= 1")]
    SampleDomain(u64),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("truncation policy '{0}' removes every bin")]
    DegenerateTruncation(String),

    #[error("all sample values are identical; sigma collapses to zero")]
    DegenerateSigma,

    #[error("bootstrap unstable: {discarded} of {rounds} rounds discarded")]
    UnstableBootstrap { discarded: usize, rounds: usize },

    #[error("fragments come from different inputs ({expected} vs {found})")]
    FragmentMismatch { expected: String, found: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("usage error: {0}")]
    Usage(String),
}

impl Error {
    /// Stable machine-readable tag for error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io",
            Error::UnknownPlatform(_) => "unknown_platform",
            Error::ParameterDomain(_) => "parameter_domain",
            Error::SampleDomain(_) => "sample_domain",
            Error::InsufficientData(_) => "insufficient_data",
            Error::DegenerateTruncation(_) => "degenerate_truncation",
            Error::DegenerateSigma => "degenerate_sigma",
            Error::UnstableBootstrap { .. } => "unstable_bootstrap",
            Error::FragmentMismatch { .. } => "fragment_mismatch",
            Error::Parse(_) => "parse",
            Error::Usage(_) => "usage",
        }
    }
}
