use super::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::special::power_sum;

/// A fitted line in log-log space: N(k) = amplitude * k^(-alpha).
///
/// This is the least-squares view of a power law and need not be
/// normalizable; call [`PowerLawModel::distribution`] for the pmf.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawModel {
    /// Expected papers at k = 1.
    pub amplitude: f64,
    /// Magnitude of the log-log slope.
    pub alpha: f64,
}

impl PowerLawModel {
    pub fn new(amplitude: f64, alpha: f64) -> Result<Self> {
        if !(amplitude > 0.0 && amplitude.is_finite()) {
            return Err(Error::ParameterDomain(format!(
                "amplitude must be positive, got {amplitude}"
            )));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::ParameterDomain(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        Ok(PowerLawModel { amplitude, alpha })
    }

    pub fn expected_count(&self, k: u64) -> f64 {
        self.amplitude * (k as f64).powf(-self.alpha)
    }

    pub fn slope(&self) -> f64 {
        -self.alpha
    }

    pub fn distribution(&self) -> Result<PowerLaw> {
        PowerLaw::new(self.alpha)
    }
}

/// A power law restricted to 1..=k_max.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedPowerLawModel {
    pub base: PowerLawModel,
    pub k_max: u64,
}

impl TruncatedPowerLawModel {
    pub fn distribution(&self) -> Result<TruncatedPowerLaw> {
        TruncatedPowerLaw::new(self.base.alpha, self.k_max)
    }
}

/// pmf(k) = k^(-alpha) / zeta(alpha), k >= 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerLaw {
    alpha: f64,
    norm: f64,
}

impl PowerLaw {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha.is_finite()) {
            return Err(Error::ParameterDomain(format!(
                "power law needs alpha > 1 to normalize, got {alpha}"
            )));
        }
        Ok(PowerLaw {
            alpha,
            norm: power_sum(alpha, 0.0, 1, None),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// zeta(alpha).
    pub fn norm(&self) -> f64 {
        self.norm
    }
}

impl DiscreteDistribution for PowerLaw {
    fn pmf(&self, k: u64) -> f64 {
        if k == 0 {
            return 0.0;
        }
        (k as f64).powf(-self.alpha) / self.norm
    }

    fn ln_pmf(&self, k: u64) -> f64 {
        if k == 0 {
            return f64::NEG_INFINITY;
        }
        -self.alpha * (k as f64).ln() - self.norm.ln()
    }

    fn cdf(&self, k: u64) -> f64 {
        1.0 - self.sf(k)
    }

    fn sf(&self, k: u64) -> f64 {
        if k == 0 {
            return 1.0;
        }
        power_sum(self.alpha, 0.0, k + 1, None) / self.norm
    }
}

/// pmf(k) proportional to k^(-alpha) on 1..=k_max. Any alpha > 0 is valid.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedPowerLaw {
    alpha: f64,
    k_max: u64,
    norm: f64,
}

impl TruncatedPowerLaw {
    pub fn new(alpha: f64, k_max: u64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::ParameterDomain(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        if k_max == 0 {
            return Err(Error::ParameterDomain("k_max must be at least 1".into()));
        }
        Ok(TruncatedPowerLaw {
            alpha,
            k_max,
            norm: power_sum(alpha, 0.0, 1, Some(k_max)),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn k_max(&self) -> u64 {
        self.k_max
    }
}

impl DiscreteDistribution for TruncatedPowerLaw {
    fn pmf(&self, k: u64) -> f64 {
        if k == 0 || k > self.k_max {
            return 0.0;
        }
        (k as f64).powf(-self.alpha) / self.norm
    }

    fn cdf(&self, k: u64) -> f64 {
        if k >= self.k_max {
            1.0
        } else {
            1.0 - self.sf(k)
        }
    }

    fn sf(&self, k: u64) -> f64 {
        if k == 0 {
            1.0
        } else if k >= self.k_max {
            0.0
        } else {
            power_sum(self.alpha, 0.0, k + 1, Some(self.k_max)) / self.norm
        }
    }

    fn support_max(&self) -> Option<u64> {
        Some(self.k_max)
    }
}
