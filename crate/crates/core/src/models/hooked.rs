use super::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::special::power_sum;

/// pmf(k) proportional to (B + k)^(-alpha) on k >= 1.
///
/// B = 0 is the pure power law; a positive offset flattens the head.
#[derive(Debug, Clone, PartialEq)]
pub struct HookedPowerLaw {
    alpha: f64,
    offset: f64,
    norm: f64,
}

impl HookedPowerLaw {
    pub fn new(alpha: f64, offset: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha.is_finite()) {
            return Err(Error::ParameterDomain(format!(
                "hooked power law needs alpha > 1 to normalize, got {alpha}"
            )));
        }
        if !(offset >= 0.0 && offset.is_finite()) {
            return Err(Error::ParameterDomain(format!(
                "offset B must be >= 0, got {offset}"
            )));
        }
        Ok(HookedPowerLaw {
            alpha,
            offset,
            norm: Self::normalizer(alpha, offset),
        })
    }

    /// Sum over k >= 1 of (B + k)^(-alpha).
    pub fn normalizer(alpha: f64, offset: f64) -> f64 {
        power_sum(alpha, offset, 1, None)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The offset B.
    pub fn offset(&self) -> f64 {
        self.offset
    }
}

impl DiscreteDistribution for HookedPowerLaw {
    fn pmf(&self, k: u64) -> f64 {
        if k == 0 {
            return 0.0;
        }
        (self.offset + k as f64).powf(-self.alpha) / self.norm
    }

    fn ln_pmf(&self, k: u64) -> f64 {
        if k == 0 {
            return f64::NEG_INFINITY;
        }
        -self.alpha * (self.offset + k as f64).ln() - self.norm.ln()
    }

    fn cdf(&self, k: u64) -> f64 {
        1.0 - self.sf(k)
    }

    fn sf(&self, k: u64) -> f64 {
        if k == 0 {
            return 1.0;
        }
        power_sum(self.alpha, self.offset, k + 1, None) / self.norm
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::PowerLaw;

    #[test]
    fn zero_offset_is_pure_power_law() {
        let m = HookedPowerLaw::new(2.0, 0.0).unwrap();
        assert!((m.pmf(1) / m.pmf(2) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn head_to_tail_ratio() {
        // Direct evaluation: ((6.709 + 10) / (6.709 + 1))^2.235.
        let m = HookedPowerLaw::new(2.235, 6.709).unwrap();
        let want = (16.709f64 / 7.709).powf(2.235);
        assert!((want - 5.634477433361036).abs() < 1e-12);
        assert!((m.pmf(1) / m.pmf(10) - want).abs() < 1e-12);
    }

    #[test]
    fn tiny_offset_matches_power_law() {
        for alpha in [1.1, 2.0, 3.7] {
            let hooked = HookedPowerLaw::new(alpha, 1e-9).unwrap();
            let pure = PowerLaw::new(alpha).unwrap();
            for k in 1..=100 {
                assert!((hooked.pmf(k) - pure.pmf(k)).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn domain() {
        assert!(HookedPowerLaw::new(1.0, 3.0).is_err());
        assert!(HookedPowerLaw::new(0.5, 3.0).is_err());
        assert!(HookedPowerLaw::new(2.0, -1.0).is_err());
    }
}
