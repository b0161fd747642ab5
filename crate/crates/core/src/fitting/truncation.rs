use std::fmt;
use std::str::FromStr;

use super::lsq::{loglog_fit_with, LsqFitResult, LsqOptions};
use crate::error::{Error, Result};
use crate::histogram::MentionHistogram;

/// Rule for discarding the sparse high-k tail before a log-log fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TruncationPolicy {
    /// Drop every level above the largest k that still has N(k) >= c.
    MinBinCount(u64),
    /// Drop levels k > K.
    MaxK(u64),
    /// Drop levels above the q-quantile of the paper-weighted k distribution.
    Quantile(f64),
    /// Keep everything.
    None,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy::MinBinCount(2)
    }
}

impl fmt::Display for TruncationPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TruncationPolicy::MinBinCount(c) => write!(f, "min_bin_count={c}"),
            TruncationPolicy::MaxK(k) => write!(f, "max_k={k}"),
            TruncationPolicy::Quantile(q) => write!(f, "quantile={q}"),
            TruncationPolicy::None => f.write_str("none"),
        }
    }
}

impl FromStr for TruncationPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, arg) = match s.split_once(['=', ':']) {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (s, None),
        };
        let bad = || Error::Usage(format!("bad truncation policy '{s}'"));
        let int = |a: Option<&str>| a.ok_or_else(bad)?.parse::<u64>().map_err(|_| bad());
        match name {
            "min_bin_count" => match arg {
                None => Ok(TruncationPolicy::default()),
                a => Ok(TruncationPolicy::MinBinCount(int(a)?)),
            },
            "max_k" => match arg {
                Some("inf") => Ok(TruncationPolicy::None),
                a => Ok(TruncationPolicy::MaxK(int(a)?)),
            },
            "quantile" => {
                let q: f64 = arg.ok_or_else(bad)?.parse().map_err(|_| bad())?;
                if !(q > 0.0 && q <= 1.0) {
                    return Err(Error::Usage(format!(
                        "quantile must lie in (0, 1], got {q}"
                    )));
                }
                Ok(TruncationPolicy::Quantile(q))
            }
            "none" => Ok(TruncationPolicy::None),
            _ => Err(bad()),
        }
    }
}

/// Applies `policy`, returning a new histogram. Surviving bins keep their
/// counts, and the lowest level is never removed.
pub fn truncate(hist: &MentionHistogram, policy: TruncationPolicy) -> Result<MentionHistogram> {
    let degenerate = || Error::DegenerateTruncation(policy.to_string());
    let cut = match policy {
        TruncationPolicy::None => return Ok(hist.clone()),
        TruncationPolicy::MinBinCount(c) => hist
            .iter()
            .rev()
            .find(|&(_, n)| n >= c)
            .map(|(k, _)| k)
            .ok_or_else(degenerate)?,
        TruncationPolicy::MaxK(k) => k,
        TruncationPolicy::Quantile(q) => {
            let target = q * hist.total_papers() as f64;
            let mut seen = 0u64;
            hist.iter()
                .find(|&(_, n)| {
                    seen += n;
                    seen as f64 >= target
                })
                .map(|(k, _)| k)
                .ok_or_else(degenerate)?
        }
    };
    let out = hist.keep_up_to(cut);
    if out.is_empty() {
        return Err(degenerate());
    }
    Ok(out)
}

/// Truncate, then fit. `pct_r2_change` compares against the full fit.
pub fn fit_truncated(
    hist: &MentionHistogram,
    policy: TruncationPolicy,
    opts: &LsqOptions,
) -> Result<LsqFitResult> {
    let full = loglog_fit_with(hist, opts)?;
    let cut = truncate(hist, policy)?;
    let mut fit = loglog_fit_with(&cut, opts)?;
    fit.k_max = Some(cut.max_k().expect("truncation keeps at least one bin"));
    fit.pct_r2_change = Some(100.0 * (fit.r_squared - full.r_squared) / full.r_squared);
    Ok(fit)
}
