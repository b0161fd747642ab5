//! Maximum-likelihood fits on raw samples.
//!
//! Parameters are searched in transformed coordinates that turn the open
//! bounds into box constraints: ln(alpha - 1) for exponents, ln(1 + B) for
//! the hooked offset and ln(sigma) for the lognormal spread. Convergence is
//! declared on the simplex diameter in those coordinates, and then checked
//! against a 5x5 grid of raw-parameter perturbations at relative step 1e-3.

use crate::error::{Error, Result};
use crate::models::{DiscretizedLognormal, DistributionModel, Family, HookedPowerLaw, PowerLaw};
use crate::optimize::{minimize, Bounds, SimplexOptions};
use crate::special::power_sum;

pub const MIN_SAMPLE: usize = 10;
pub const ALPHA_MAX: f64 = 50.0;
pub const OFFSET_MAX: f64 = 1e4;
const ALPHA_MIN_EXCESS: f64 = 1e-3;
const SIGMA_MIN: f64 = 1e-3;
const SIGMA_MAX: f64 = 20.0;
const MU_LIMIT: f64 = 20.0;
const GRID: usize = 16;
const VERIFY_STEP: f64 = 1e-3;
const MAX_POLISH: usize = 3;
const BOUNDARY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct MleFitResult {
    pub model: DistributionModel,
    pub log_likelihood: f64,
    /// Simplex converged, no verification-grid point beats the optimum, and
    /// the optimum is not pinned to a search bound.
    pub converged: bool,
    /// The optimum sits on a search bound (other than B = 0).
    pub at_boundary: bool,
    /// Simplex converged and no verification-grid point beats the optimum,
    /// whether or not the optimum is on a bound.
    pub verified: bool,
    pub iterations: usize,
}

/// Sample collapsed to distinct values with multiplicities.
struct Tally {
    values: Vec<u64>,
    counts: Vec<f64>,
    n: f64,
}

impl Tally {
    fn new(sample: &[u64]) -> Result<Self> {
        if sample.len() < MIN_SAMPLE {
            return Err(Error::InsufficientData(format!(
                "maximum likelihood needs at least {MIN_SAMPLE} observations, got {}",
                sample.len()
            )));
        }
        if sample.contains(&0) {
            return Err(Error::SampleDomain(0));
        }
        let mut sorted = sample.to_vec();
        sorted.sort_unstable();
        let mut values = Vec::new();
        let mut counts: Vec<f64> = Vec::new();
        for v in sorted {
            if values.last() == Some(&v) {
                *counts.last_mut().expect("parallel vecs") += 1.0;
            } else {
                values.push(v);
                counts.push(1.0);
            }
        }
        Ok(Tally {
            values,
            counts,
            n: sample.len() as f64,
        })
    }

    fn weighted_sum(&self, f: impl Fn(u64) -> f64) -> f64 {
        self.values
            .iter()
            .zip(&self.counts)
            .map(|(&v, &c)| c * f(v))
            .sum()
    }
}

/// One family's likelihood surface in search coordinates.
trait Surface {
    fn lower(&self) -> &[f64];
    fn upper(&self) -> &[f64];
    /// Search coordinates to raw parameters.
    fn to_raw(&self, x: &[f64]) -> Vec<f64>;
    fn to_search(&self, raw: &[f64]) -> Vec<f64>;
    fn ll_raw(&self, raw: &[f64]) -> f64;
    fn clamp_raw(&self, raw: &mut [f64]);
    /// Whether the raw point is on a bound that counts as non-convergence.
    fn on_boundary(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lower().iter().zip(self.upper()))
            .enumerate()
            .any(|(i, (&v, (&lo, &hi)))| {
                (v - hi).abs() < BOUNDARY_TOL
                    || (self.lower_is_boundary(i) && (v - lo).abs() < BOUNDARY_TOL)
            })
    }
    fn lower_is_boundary(&self, _dim: usize) -> bool {
        true
    }
    fn model(&self, raw: &[f64]) -> Result<DistributionModel>;
}

struct HookedSurface<'a> {
    tally: &'a Tally,
    lower: [f64; 2],
    upper: [f64; 2],
}

impl<'a> HookedSurface<'a> {
    fn new(tally: &'a Tally) -> Self {
        HookedSurface {
            tally,
            lower: [ALPHA_MIN_EXCESS.ln(), 0.0],
            upper: [(ALPHA_MAX - 1.0).ln(), OFFSET_MAX.ln_1p()],
        }
    }
}

impl Surface for HookedSurface<'_> {
    fn lower(&self) -> &[f64] {
        &self.lower
    }
    fn upper(&self) -> &[f64] {
        &self.upper
    }
    fn to_raw(&self, x: &[f64]) -> Vec<f64> {
        vec![1.0 + x[0].exp(), x[1].exp_m1()]
    }
    fn to_search(&self, raw: &[f64]) -> Vec<f64> {
        vec![(raw[0] - 1.0).ln(), raw[1].ln_1p()]
    }
    fn ll_raw(&self, raw: &[f64]) -> f64 {
        let (alpha, offset) = (raw[0], raw[1]);
        let norm = HookedPowerLaw::normalizer(alpha, offset);
        -alpha * self.tally.weighted_sum(|v| (offset + v as f64).ln()) - self.tally.n * norm.ln()
    }
    fn clamp_raw(&self, raw: &mut [f64]) {
        raw[0] = raw[0].clamp(1.0 + ALPHA_MIN_EXCESS, ALPHA_MAX);
        raw[1] = raw[1].clamp(0.0, OFFSET_MAX);
    }
    fn lower_is_boundary(&self, dim: usize) -> bool {
        // B = 0 is the pure power law, a legitimate optimum.
        dim == 0
    }
    fn model(&self, raw: &[f64]) -> Result<DistributionModel> {
        Ok(HookedPowerLaw::new(raw[0], raw[1])?.into())
    }
}

struct LognormalSurface<'a> {
    tally: &'a Tally,
    lower: [f64; 2],
    upper: [f64; 2],
}

impl Surface for LognormalSurface<'_> {
    fn lower(&self) -> &[f64] {
        &self.lower
    }
    fn upper(&self) -> &[f64] {
        &self.upper
    }
    fn to_raw(&self, x: &[f64]) -> Vec<f64> {
        vec![x[0], x[1].exp()]
    }
    fn to_search(&self, raw: &[f64]) -> Vec<f64> {
        vec![raw[0], raw[1].ln()]
    }
    fn ll_raw(&self, raw: &[f64]) -> f64 {
        let (mu, sigma) = (raw[0], raw[1]);
        match DiscretizedLognormal::log_normalizer(mu, sigma) {
            Ok(log_norm) => {
                self.tally
                    .weighted_sum(|v| DiscretizedLognormal::log_weight(mu, sigma, v))
                    - self.tally.n * log_norm
            }
            Err(_) => f64::NEG_INFINITY,
        }
    }
    fn clamp_raw(&self, raw: &mut [f64]) {
        raw[0] = raw[0].clamp(-MU_LIMIT, MU_LIMIT);
        raw[1] = raw[1].clamp(SIGMA_MIN, SIGMA_MAX);
    }
    fn model(&self, raw: &[f64]) -> Result<DistributionModel> {
        Ok(DiscretizedLognormal::new(raw[0], raw[1])?.into())
    }
}

struct PowerLawSurface<'a> {
    tally: &'a Tally,
    sum_ln: f64,
    lower: [f64; 1],
    upper: [f64; 1],
}

impl Surface for PowerLawSurface<'_> {
    fn lower(&self) -> &[f64] {
        &self.lower
    }
    fn upper(&self) -> &[f64] {
        &self.upper
    }
    fn to_raw(&self, x: &[f64]) -> Vec<f64> {
        vec![1.0 + x[0].exp()]
    }
    fn to_search(&self, raw: &[f64]) -> Vec<f64> {
        vec![(raw[0] - 1.0).ln()]
    }
    fn ll_raw(&self, raw: &[f64]) -> f64 {
        -raw[0] * self.sum_ln - self.tally.n * power_sum(raw[0], 0.0, 1, None).ln()
    }
    fn clamp_raw(&self, raw: &mut [f64]) {
        raw[0] = raw[0].clamp(1.0 + ALPHA_MIN_EXCESS, ALPHA_MAX);
    }
    fn model(&self, raw: &[f64]) -> Result<DistributionModel> {
        Ok(PowerLaw::new(raw[0])?.into())
    }
}

/// 5^dim raw-parameter perturbations around `raw` at relative step 1e-3
/// (absolute 1e-3 for a zero coordinate), clamped to the search domain.
fn verification_points(surface: &dyn Surface, raw: &[f64]) -> Vec<Vec<f64>> {
    let steps: Vec<f64> = raw
        .iter()
        .map(|&p| {
            if p == 0.0 {
                VERIFY_STEP
            } else {
                VERIFY_STEP * p.abs()
            }
        })
        .collect();
    let mut points = vec![Vec::new()];
    for (&p, &step) in raw.iter().zip(&steps) {
        points = points
            .into_iter()
            .flat_map(|prefix: Vec<f64>| {
                (-2..=2).map(move |j| {
                    let mut v = prefix.clone();
                    v.push(p + j as f64 * step);
                    v
                })
            })
            .collect();
    }
    for p in &mut points {
        surface.clamp_raw(p);
    }
    points
}

fn refine(surface: &dyn Surface, start: Vec<f64>, step: Vec<f64>) -> Result<MleFitResult> {
    let bounds = Bounds {
        lower: surface.lower(),
        upper: surface.upper(),
    };
    let objective = |x: &[f64]| -surface.ll_raw(&surface.to_raw(x));
    let mut run = minimize(objective, &start, &step, &bounds, SimplexOptions::default());
    let mut iterations = run.iterations;
    let mut raw = surface.to_raw(&run.x);
    let mut best_ll = -run.value;
    let mut verified = false;
    for polish in 0..=MAX_POLISH {
        let better = verification_points(surface, &raw)
            .into_iter()
            .map(|p| {
                let ll = surface.ll_raw(&p);
                (p, ll)
            })
            .filter(|(_, ll)| *ll > best_ll)
            .max_by(|a, b| a.1.total_cmp(&b.1));
        match better {
            None => {
                verified = true;
                break;
            }
            Some((p, ll)) => {
                raw = p;
                best_ll = ll;
                if polish == MAX_POLISH {
                    break;
                }
                let restart = surface.to_search(&raw);
                let local_step: Vec<f64> =
                    restart.iter().map(|v| 1e-3 * v.abs().max(1e-2)).collect();
                run = minimize(
                    objective,
                    &restart,
                    &local_step,
                    &bounds,
                    SimplexOptions::default(),
                );
                iterations += run.iterations;
                if -run.value > best_ll {
                    raw = surface.to_raw(&run.x);
                    best_ll = -run.value;
                }
            }
        }
    }
    let at_boundary = surface.on_boundary(&surface.to_search(&raw));
    Ok(MleFitResult {
        model: surface.model(&raw)?,
        log_likelihood: best_ll,
        converged: run.converged && verified && !at_boundary,
        at_boundary,
        verified: run.converged && verified,
        iterations,
    })
}

/// Coarse log-spaced grid over alpha in (1, 50] and B in [0, 1e4], then
/// simplex refinement from the best cell.
pub fn fit_hooked_mle(sample: &[u64]) -> Result<MleFitResult> {
    let tally = Tally::new(sample)?;
    let surface = HookedSurface::new(&tally);
    let grid_lo = [0.01f64.ln(), 0.0];
    let spacing: Vec<f64> = (0..2)
        .map(|d| (surface.upper[d] - grid_lo[d]) / (GRID - 1) as f64)
        .collect();
    // Ties resolve to the first cell in lexicographic (alpha, B) order.
    let mut best = (f64::NEG_INFINITY, vec![grid_lo[0], grid_lo[1]]);
    for i in 0..GRID {
        for j in 0..GRID {
            let x = vec![
                grid_lo[0] + i as f64 * spacing[0],
                grid_lo[1] + j as f64 * spacing[1],
            ];
            let ll = surface.ll_raw(&surface.to_raw(&x));
            if ll > best.0 {
                best = (ll, x);
            }
        }
    }
    let step = spacing.iter().map(|s| 0.5 * s).collect();
    refine(&surface, best.1, step)
}

/// Starts from the mean and standard deviation of ln(x + 1) and refines on
/// the discretized likelihood.
pub fn fit_dlognormal_mle(sample: &[u64]) -> Result<MleFitResult> {
    let tally = Tally::new(sample)?;
    if tally.values.len() == 1 {
        return Err(Error::DegenerateSigma);
    }
    let mean = tally.weighted_sum(|v| ((v + 1) as f64).ln()) / tally.n;
    let var = tally.weighted_sum(|v| (((v + 1) as f64).ln() - mean).powi(2)) / tally.n;
    let sigma = var.sqrt().clamp(SIGMA_MIN, SIGMA_MAX);
    let surface = LognormalSurface {
        tally: &tally,
        lower: [-MU_LIMIT, SIGMA_MIN.ln()],
        upper: [MU_LIMIT, SIGMA_MAX.ln()],
    };
    let start = vec![mean.clamp(-MU_LIMIT, MU_LIMIT), sigma.ln()];
    refine(&surface, start, vec![0.2 * sigma.max(0.1), 0.2])
}

/// Discrete power law on k >= 1.
pub fn fit_power_law_mle(sample: &[u64]) -> Result<MleFitResult> {
    let tally = Tally::new(sample)?;
    let sum_ln = tally.weighted_sum(|v| (v as f64).ln());
    let surface = PowerLawSurface {
        tally: &tally,
        sum_ln,
        lower: [ALPHA_MIN_EXCESS.ln()],
        upper: [(ALPHA_MAX - 1.0).ln()],
    };
    // Continuous approximation with the usual half-integer shift.
    let approx = 1.0 + tally.n / tally.weighted_sum(|v| (v as f64 / 0.5).ln());
    let start = surface.to_search(&[approx.clamp(1.0 + ALPHA_MIN_EXCESS, ALPHA_MAX)]);
    refine(&surface, start, vec![0.2])
}

pub fn fit_family(family: Family, sample: &[u64]) -> Result<MleFitResult> {
    match family {
        Family::Hooked => fit_hooked_mle(sample),
        Family::DLognormal => fit_dlognormal_mle(sample),
        Family::PowerLaw => fit_power_law_mle(sample),
        Family::TruncatedPowerLaw => Err(Error::Usage(
            "truncated power laws are fitted by log-log least squares, not maximum likelihood"
                .into(),
        )),
    }
}
