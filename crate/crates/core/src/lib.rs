//! Fitting heavy-tailed discrete distributions to per-paper mention counts.
//!
//! The pipeline reads mention records, builds size-frequency histograms per
//! platform, fits power laws by log-log least squares (optionally after
//! truncating the sparse tail), fits hooked power-law and discretized
//! lognormal models by maximum likelihood, and scores them with a
//! Kolmogorov–Smirnov test calibrated by a refitting bootstrap.

pub mod error;
pub mod fitting;
pub mod format;
pub mod gof;
pub mod histogram;
pub mod models;
pub mod optimize;
pub mod pipeline;
pub mod plot;
pub mod report;
pub mod special;

pub use error::{Error, Result};
