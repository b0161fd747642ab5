use rand::Rng;

use super::DiscreteDistribution;

const TABLE_CAP: u64 = 1 << 16;
const TABLE_MASS: f64 = 1.0 - 1e-12;
/// Draws beyond this are clamped; only reachable for alpha barely above 1.
const MAX_DRAW: u64 = 1 << 62;

/// Inverse-cdf sampler: binary search over a cdf table for the bulk of the
/// mass, and a doubling-then-bisection search on the survival function for
/// draws that land beyond the table.
pub struct InverseCdfSampler<'a, D: ?Sized> {
    dist: &'a D,
    table: Vec<f64>,
}

impl<'a, D: DiscreteDistribution + ?Sized> InverseCdfSampler<'a, D> {
    pub fn new(dist: &'a D) -> Self {
        let cap = dist.support_max().map_or(TABLE_CAP, |m| m.min(TABLE_CAP));
        let mut table = Vec::new();
        let mut acc = 0.0;
        for k in 1..=cap {
            acc += dist.pmf(k);
            table.push(acc);
            if acc >= TABLE_MASS {
                break;
            }
        }
        if dist.support_max() == Some(table.len() as u64) {
            *table.last_mut().expect("support is non-empty") = 1.0;
        }
        InverseCdfSampler { dist, table }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let u: f64 = rng.random();
        let idx = self.table.partition_point(|&c| c <= u);
        if idx < self.table.len() {
            idx as u64 + 1
        } else {
            self.tail_search(1.0 - u)
        }
    }

    pub fn draw_many<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<u64> {
        (0..n).map(|_| self.draw(rng)).collect()
    }

    /// Smallest k beyond the table with P(X > k) < s.
    fn tail_search(&self, s: f64) -> u64 {
        let upper = self.dist.support_max().unwrap_or(MAX_DRAW);
        let mut lo = self.table.len() as u64;
        if lo >= upper {
            return upper;
        }
        let mut hi = lo.saturating_mul(2).min(upper);
        while self.dist.sf(hi) >= s {
            if hi >= upper {
                return upper;
            }
            lo = hi;
            hi = hi.saturating_mul(2).min(upper);
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.dist.sf(mid) < s {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{HookedPowerLaw, PowerLaw, TruncatedPowerLaw};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn heavy_tail_draws_follow_survival() {
        // alpha = 1.5 puts ~0.3% of mass beyond the table.
        let m = PowerLaw::new(1.5).unwrap();
        let sampler = InverseCdfSampler::new(&m);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 400_000;
        let draws = sampler.draw_many(&mut rng, n);
        for &k in &[10u64, 1000, 100_000, 10_000_000] {
            let frac = draws.iter().filter(|&&d| d > k).count() as f64 / n as f64;
            let p = m.sf(k);
            let se = (p * (1.0 - p) / n as f64).sqrt();
            assert!((frac - p).abs() < 5.0 * se + 1e-6, "k={k}: {frac} vs {p}");
        }
    }

    #[test]
    fn truncated_draws_stay_in_support() {
        let m = TruncatedPowerLaw::new(0.2, 200_000).unwrap();
        let sampler = InverseCdfSampler::new(&m);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let draws = sampler.draw_many(&mut rng, 50_000);
        assert!(draws.iter().all(|&d| (1..=200_000).contains(&d)));
        assert!(draws.iter().any(|&d| d > 1 << 16));
    }

    #[test]
    fn frequencies_match_pmf() {
        let m = HookedPowerLaw::new(2.2, 6.7).unwrap();
        let sampler = InverseCdfSampler::new(&m);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 200_000;
        let draws = sampler.draw_many(&mut rng, n);
        for k in 1..=5u64 {
            let frac = draws.iter().filter(|&&d| d == k).count() as f64 / n as f64;
            let p = m.pmf(k);
            let se = (p * (1.0 - p) / n as f64).sqrt();
            assert!((frac - p).abs() < 5.0 * se);
        }
    }
}
