use super::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::special::normal_upper_tail;

const MIN_DIRECT: u64 = 64;
const SMOOTH_FROM: u64 = 4096;
const HARD_CAP: u64 = 1 << 22;
const TAIL_REL: f64 = 1e-13;
const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_7;

/// Lognormal density of ln(k + 1) evaluated at integer k >= 1 and
/// renormalized:
///
/// weight(k) = exp(-(ln(k+1) - mu)^2 / (2 sigma^2)) / (k + 1)
///
/// Weights are summed directly until the integral bound on the remaining
/// mass drops below 1e-13 of the running total (or the weight has become
/// smooth on the unit scale), and the remainder is closed with the exact
/// normal-tail integral plus Euler–Maclaurin end corrections. Weights are
/// kept relative to their peak so extreme parameters neither overflow nor
/// underflow.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedLognormal {
    mu: f64,
    sigma: f64,
    log_scale: f64,
    /// cum[i] = sum of scaled weights for k = 1..=i+1.
    cum: Vec<f64>,
    /// Scaled mass beyond the last tabulated k.
    tail: f64,
    norm: f64,
}

struct Normalizer {
    log_scale: f64,
    head: f64,
    tail: f64,
}

impl DiscretizedLognormal {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        check_domain(mu, sigma)?;
        let mut cum = Vec::new();
        let n = normalize(mu, sigma, Some(&mut cum));
        Ok(DiscretizedLognormal {
            mu,
            sigma,
            log_scale: n.log_scale,
            cum,
            tail: n.tail,
            norm: n.head + n.tail,
        })
    }

    /// ln of the sum over k >= 1 of weight(k), without building the cdf table.
    pub fn log_normalizer(mu: f64, sigma: f64) -> Result<f64> {
        check_domain(mu, sigma)?;
        let n = normalize(mu, sigma, None);
        Ok(n.log_scale + (n.head + n.tail).ln())
    }

    /// ln weight(k), unnormalized.
    pub fn log_weight(mu: f64, sigma: f64, k: u64) -> f64 {
        let l = ((k + 1) as f64).ln();
        -l - (l - mu).powi(2) / (2.0 * sigma * sigma)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    fn last(&self) -> u64 {
        self.cum.len() as u64
    }

    fn scaled_weight(&self, k: u64) -> f64 {
        (Self::log_weight(self.mu, self.sigma, k) - self.log_scale).exp()
    }
}

fn check_domain(mu: f64, sigma: f64) -> Result<()> {
    if !mu.is_finite() {
        return Err(Error::ParameterDomain(format!(
            "mu must be finite, got {mu}"
        )));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::ParameterDomain(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    Ok(())
}

fn normalize(mu: f64, sigma: f64, mut table: Option<&mut Vec<f64>>) -> Normalizer {
    let var = sigma * sigma;
    // ln weight is maximal at ln(k+1) = mu - sigma^2.
    let peak_k = ((mu - var).exp() - 1.0).round().clamp(1.0, 1e15) as u64;
    let log_scale = DiscretizedLognormal::log_weight(mu, sigma, peak_k)
        .max(DiscretizedLognormal::log_weight(mu, sigma, 1));

    let mut head = 0.0;
    let mut k = 0u64;
    loop {
        k += 1;
        head += (DiscretizedLognormal::log_weight(mu, sigma, k) - log_scale).exp();
        if let Some(t) = table.as_deref_mut() {
            t.push(head);
        }
        if k >= MIN_DIRECT && k.is_multiple_of(16) {
            let t = (k + 1) as f64;
            let l = t.ln();
            if l > mu - var {
                let bound = log_tail_integral(mu, sigma, k, log_scale).exp();
                let steepness = (1.0 + (l - mu) / var) / t;
                if bound < TAIL_REL * head
                    || (k >= SMOOTH_FROM && steepness < 0.02)
                    || k >= HARD_CAP
                {
                    break;
                }
            }
        }
    }
    Normalizer {
        log_scale,
        head,
        tail: tail_beyond(mu, sigma, k, log_scale),
    }
}

/// ln of the integral of the scaled weight over [k, inf).
fn log_tail_integral(mu: f64, sigma: f64, k: u64, log_scale: f64) -> f64 {
    let z = (((k + 1) as f64).ln() - mu) / sigma;
    (sigma * SQRT_TWO_PI).ln() + ln_normal_upper_tail(z) - log_scale
}

fn ln_normal_upper_tail(z: f64) -> f64 {
    if z < 8.0 {
        normal_upper_tail(z).ln()
    } else {
        let z2 = z * z;
        -0.5 * z2 - (z * SQRT_TWO_PI).ln() + (1.0 - 1.0 / z2 + 3.0 / (z2 * z2)).ln()
    }
}

/// Scaled mass strictly beyond k: integral minus the Euler–Maclaurin end
/// terms w(k)/2 + w'(k)/12.
fn tail_beyond(mu: f64, sigma: f64, k: u64, log_scale: f64) -> f64 {
    let integral = log_tail_integral(mu, sigma, k, log_scale).exp();
    let t = (k + 1) as f64;
    let w = (DiscretizedLognormal::log_weight(mu, sigma, k) - log_scale).exp();
    let steepness = (1.0 + (t.ln() - mu) / (sigma * sigma)) / t;
    (integral - 0.5 * w + w * steepness / 12.0).clamp(0.0, integral)
}

impl DiscreteDistribution for DiscretizedLognormal {
    fn pmf(&self, k: u64) -> f64 {
        if k == 0 {
            return 0.0;
        }
        self.scaled_weight(k) / self.norm
    }

    fn ln_pmf(&self, k: u64) -> f64 {
        if k == 0 {
            return f64::NEG_INFINITY;
        }
        Self::log_weight(self.mu, self.sigma, k) - self.log_scale - self.norm.ln()
    }

    fn cdf(&self, k: u64) -> f64 {
        if k == 0 {
            0.0
        } else if k <= self.last() {
            self.cum[k as usize - 1] / self.norm
        } else {
            1.0 - self.sf(k)
        }
    }

    fn sf(&self, k: u64) -> f64 {
        let last = self.last();
        if k == 0 {
            1.0
        } else if k < last {
            let head = self.cum[last as usize - 1];
            (head - self.cum[k as usize - 1] + self.tail) / self.norm
        } else if k == last {
            self.tail / self.norm
        } else {
            tail_beyond(self.mu, self.sigma, k, self.log_scale).min(self.tail) / self.norm
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::DistributionModel;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    #[test]
    fn mode_by_exhaustive_scan() {
        let m = DiscretizedLognormal::new(1.701, 1.525).unwrap();
        let mut best = (1, m.pmf(1));
        for k in 2..=10_000 {
            let p = m.pmf(k);
            if p > best.1 {
                best = (k, p);
            }
        }
        // ln(k+1) peaks at mu - sigma^2 < ln 2, so the mass is largest at k = 1.
        assert_eq!(best.0, 1);
        assert!(m.pmf(1) > m.pmf(2));

        let m = DiscretizedLognormal::new(4.0, 0.5).unwrap();
        let scan = (1..=10_000u64)
            .max_by(|&a, &b| m.pmf(a).partial_cmp(&m.pmf(b)).unwrap())
            .unwrap();
        // exp(4 - 0.25) - 1 = 41.5
        assert!(scan == 41 || scan == 42, "{scan}");
    }

    #[test]
    fn extreme_parameters_stay_finite() {
        for &(mu, sigma) in &[(-5.0, 0.1), (12.0, 0.01), (0.0, 8.0), (-30.0, 3.0)] {
            let m = DiscretizedLognormal::new(mu, sigma).unwrap();
            let p = m.pmf(1);
            assert!((0.0..=1.0).contains(&p), "{mu} {sigma}: {p}");
            assert!(m.ln_pmf(1).is_finite());
            let mode = ((mu - sigma * sigma).exp() - 1.0).max(1.0).round() as u64;
            assert!(m.pmf(mode) > 0.0, "{mu} {sigma}");
            assert!(DiscretizedLognormal::log_normalizer(mu, sigma)
                .unwrap()
                .is_finite());
        }
    }

    #[test]
    fn domain() {
        assert!(DiscretizedLognormal::new(1.0, 0.0).is_err());
        assert!(DiscretizedLognormal::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn normalizer_against_brute_force() {
        for &(mu, sigma) in &[(1.0, 0.5), (1.701, 1.525), (0.99, 0.494), (3.0, 1.0)] {
            let n = 1_000_000u64;
            let head: f64 = (1..=n)
                .map(|k| DiscretizedLognormal::log_weight(mu, sigma, k).exp())
                .sum();
            // Midpoint rule for the remainder.
            let z = (((n as f64) + 1.5).ln() - mu) / sigma;
            let tail = sigma * SQRT_TWO_PI * normal_upper_tail(z);
            let want = (head + tail).ln();
            let got = DiscretizedLognormal::log_normalizer(mu, sigma).unwrap();
            assert!((got - want).abs() < 1e-11, "{mu} {sigma}: {got} vs {want}");
        }
    }

    #[test]
    fn sampler_passes_chi_square() {
        let m = DiscretizedLognormal::new(1.0, 0.5).unwrap();
        let n = 100_000usize;
        let draws = DistributionModel::from(m.clone()).sample(n, 2024);
        let mut observed = vec![0u64; 64];
        for d in draws {
            observed[(d as usize).min(63)] += 1;
        }
        // Pool bins until each expected count is at least 5.
        let mut stat = 0.0;
        let mut cells = 0;
        let (mut obs_acc, mut exp_acc) = (0.0, 0.0);
        for k in 1..63u64 {
            obs_acc += observed[k as usize] as f64;
            exp_acc += m.pmf(k) * n as f64;
            if exp_acc >= 5.0 {
                stat += (obs_acc - exp_acc).powi(2) / exp_acc;
                cells += 1;
                obs_acc = 0.0;
                exp_acc = 0.0;
            }
        }
        obs_acc += observed[63] as f64;
        exp_acc += m.sf(62) * n as f64;
        if exp_acc > 0.0 {
            stat += (obs_acc - exp_acc).powi(2) / exp_acc;
            cells += 1;
        }
        let p = 1.0 - ChiSquared::new((cells - 1) as f64).unwrap().cdf(stat);
        assert!(p > 0.001, "chi2={stat} cells={cells} p={p}");
    }
}
