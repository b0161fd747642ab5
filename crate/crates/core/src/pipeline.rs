//! End-to-end runs over ingested records, shared by the CLI verbs.

use crate::error::{Error, Result};
use crate::fitting::{fit_truncated, loglog_fit_with, LsqFitResult, LsqOptions};
use crate::gof::{bootstrap_pvalue, draw_analysis_sample};
use crate::histogram::{build_histogram, Ingested, MentionHistogram, Platform};
use crate::models::Family;
use crate::plot;
use crate::report::{AnalysisReport, LsqEntry, MleEntry, RunConfig};

/// The requested platforms, or every platform with a nonzero count when
/// none were named.
pub fn select_platforms(input: &Ingested, requested: &[Platform]) -> Vec<Platform> {
    let mut out: Vec<Platform> = if requested.is_empty() {
        Platform::ALL
            .into_iter()
            .filter(|&p| input.summary.nonzero(p) > 0)
            .collect()
    } else {
        requested.to_vec()
    };
    out.sort();
    out.dedup();
    out
}

fn lsq_options(cfg: &RunConfig) -> LsqOptions {
    LsqOptions {
        log_bins_per_decade: cfg.log_bins_per_decade,
    }
}

pub fn fit_histogram(
    hist: &MentionHistogram,
    platform: Platform,
    cfg: &RunConfig,
) -> Result<LsqEntry> {
    let opts = lsq_options(cfg);
    Ok(LsqEntry {
        platform,
        full: loglog_fit_with(hist, &opts)?,
        truncated: cfg
            .truncation
            .map(|policy| fit_truncated(hist, policy, &opts))
            .transpose()?,
    })
}

/// Log-log fits, plus truncated fits when the config names a policy.
pub fn run_fit(
    input: &Ingested,
    platforms: &[Platform],
    cfg: &RunConfig,
) -> Result<AnalysisReport> {
    let mut report = AnalysisReport::new(input.digest.clone(), cfg.clone());
    report.ingest = Some(input.summary.clone());
    for p in select_platforms(input, platforms) {
        let hist = build_histogram(&input.records, p);
        report.add_lsq(fit_histogram(&hist, p, cfg)?);
    }
    Ok(report)
}

fn check_sample_name(name: &str) -> Result<()> {
    let ok = !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'));
    if ok {
        Ok(())
    } else {
        Err(Error::Usage(format!(
            "sample name '{name}' may only use letters, digits, '_', '-' and '.'"
        )))
    }
}

/// Draws the analysis sample for each platform and scores every family on
/// it. All families see the same sample.
pub fn run_gof(
    input: &Ingested,
    platforms: &[Platform],
    families: &[Family],
    sample_name: &str,
    cfg: &RunConfig,
) -> Result<AnalysisReport> {
    check_sample_name(sample_name)?;
    let mut report = AnalysisReport::new(input.digest.clone(), cfg.clone());
    report.ingest = Some(input.summary.clone());
    for p in select_platforms(input, platforms) {
        let sample = draw_analysis_sample(
            &input.records,
            p,
            cfg.sample_size,
            cfg.seed,
            cfg.with_replacement,
        )?;
        for &family in families {
            let outcome =
                bootstrap_pvalue(&sample, family, cfg.rounds, cfg.seed, cfg.significance)?;
            report.add_mle(MleEntry {
                platform: p,
                sample: sample_name.to_string(),
                sample_size: sample.len(),
                fit: outcome.fit,
                gof: Some(outcome.gof),
            });
        }
    }
    Ok(report)
}

pub struct PlotOutput {
    pub svg: String,
    pub sidecar: String,
    pub fit: LsqFitResult,
}

/// Plots the truncated histogram when the config names a policy, the full
/// one otherwise.
pub fn run_plot(input: &Ingested, platform: Platform, cfg: &RunConfig) -> Result<PlotOutput> {
    let hist = build_histogram(&input.records, platform);
    let entry = fit_histogram(&hist, platform, cfg)?;
    let shown = match cfg.truncation {
        Some(policy) => crate::fitting::truncate(&hist, policy)?,
        None => hist,
    };
    let points = LsqFitResult::points(&shown, &lsq_options(cfg));
    let fit = entry.preferred().clone();
    Ok(PlotOutput {
        svg: plot::render_svg(&format!("{platform} size-frequency"), &points, &fit),
        sidecar: plot::sidecar(&points),
        fit,
    })
}
