//! Kolmogorov–Smirnov goodness of fit with a refitting bootstrap.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fitting::{fit_family, MleFitResult, MIN_SAMPLE};
use crate::histogram::{MentionRecord, Platform};
use crate::models::{DiscreteDistribution, Family, InverseCdfSampler};

pub const DEFAULT_SAMPLE_SIZE: usize = 500;
pub const DEFAULT_ROUNDS: usize = 1000;
pub const DEFAULT_SIGNIFICANCE: f64 = 0.05;
/// Largest tolerated share of discarded bootstrap rounds.
pub const MAX_DISCARD_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct GofResult {
    pub ks: f64,
    pub p_value: f64,
    /// Rounds requested.
    pub n_bootstrap: usize,
    /// Rounds dropped because the refit optimizer failed.
    pub discarded: usize,
    pub significance: f64,
    pub plausible: bool,
    pub seed: u64,
}

impl GofResult {
    pub fn verdict(p_value: f64, significance: f64) -> bool {
        p_value > significance
    }
}

/// Maximum of |F_emp(k) - F(k)| over the distinct observed values k.
pub fn ks_statistic<D: DiscreteDistribution + ?Sized>(sample: &[u64], model: &D) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::InsufficientData(
            "KS statistic of an empty sample".into(),
        ));
    }
    let mut sorted = sample.to_vec();
    sorted.sort_unstable();
    if sorted[0] == 0 {
        return Err(Error::SampleDomain(0));
    }
    Ok(ks_sorted(&sorted, model))
}

fn ks_sorted<D: DiscreteDistribution + ?Sized>(sorted: &[u64], model: &D) -> f64 {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let k = sorted[i];
        while i < sorted.len() && sorted[i] == k {
            i += 1;
        }
        d = d.max((i as f64 / n - model.cdf(k)).abs());
    }
    d.min(1.0)
}

/// Draws `n` of the nonzero `platform` counts, without replacement unless
/// `with_replacement` is set.
pub fn draw_analysis_sample(
    records: &[MentionRecord],
    platform: Platform,
    n: usize,
    seed: u64,
    with_replacement: bool,
) -> Result<Vec<u64>> {
    let mut eligible: Vec<u64> = records
        .iter()
        .map(|r| r.count(platform))
        .filter(|&c| c > 0)
        .collect();
    let too_few = || {
        Error::InsufficientData(format!(
            "{platform}: {n} observations requested, {} records with a nonzero count",
            eligible.len()
        ))
    };
    if eligible.len() < n || (with_replacement && eligible.is_empty() && n > 0) {
        return Err(too_few());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if with_replacement {
        return Ok((0..n)
            .map(|_| eligible[rng.random_range(0..eligible.len())])
            .collect());
    }
    let (picked, _) = eligible.partial_shuffle(&mut rng, n);
    Ok(picked.to_vec())
}

/// Fitted model plus its bootstrap score.
#[derive(Debug, Clone, PartialEq)]
pub struct GofOutcome {
    pub fit: MleFitResult,
    pub gof: GofResult,
}

/// Fits `family` to `sample`, then calibrates the observed KS distance
/// against `rounds` synthetic samples drawn from the fit and refitted.
///
/// p = (1 + #{round ks >= observed}) / (used + 1), where `used` excludes
/// rounds whose refit optimizer failed. Refits that land on a search bound
/// are kept: they are the constrained maximum, the same kind of estimate
/// the observed distance was measured against. Round r draws from the ChaCha8
/// stream r + 1 of the master seed, so the result does not depend on how
/// rounds are scheduled.
pub fn bootstrap_pvalue(
    sample: &[u64],
    family: Family,
    rounds: usize,
    seed: u64,
    significance: f64,
) -> Result<GofOutcome> {
    if sample.len() < MIN_SAMPLE {
        return Err(Error::InsufficientData(format!(
            "bootstrap needs at least {MIN_SAMPLE} observations, got {}",
            sample.len()
        )));
    }
    if rounds == 0 {
        return Err(Error::Usage("bootstrap needs at least one round".into()));
    }
    let fit = fit_family(family, sample)?;
    let d_obs = ks_statistic(sample, &fit.model)?;
    let sampler = InverseCdfSampler::new(&fit.model);
    let n = sample.len();

    let round_ks: Vec<Option<f64>> = (0..rounds)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64 + 1);
            let mut synthetic = sampler.draw_many(&mut rng, n);
            let refit = fit_family(family, &synthetic).ok().filter(|f| f.verified)?;
            synthetic.sort_unstable();
            Some(ks_sorted(&synthetic, &refit.model))
        })
        .collect();

    let used: Vec<f64> = round_ks.into_iter().flatten().collect();
    let discarded = rounds - used.len();
    if discarded as f64 > MAX_DISCARD_FRACTION * rounds as f64 {
        return Err(Error::UnstableBootstrap { discarded, rounds });
    }
    let exceed = used.iter().filter(|&&d| d >= d_obs).count();
    let p_value = (1 + exceed) as f64 / (used.len() + 1) as f64;
    Ok(GofOutcome {
        fit,
        gof: GofResult {
            ks: d_obs,
            p_value,
            n_bootstrap: rounds,
            discarded,
            significance,
            plausible: GofResult::verdict(p_value, significance),
            seed,
        },
    })
}
