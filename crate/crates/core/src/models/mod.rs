//! Discrete heavy-tailed families on the support k >= 1.
//!
//! Every family is normalized on construction and immutable afterwards. The
//! [`DistributionModel`] enum wraps them for code that picks a family at run
//! time and carries the flat `family=<name>; param=<value>` text form.

mod hooked;
mod lognormal;
mod power_law;
mod sampler;

use std::fmt;
use std::str::FromStr;

pub use hooked::HookedPowerLaw;
pub use lognormal::DiscretizedLognormal;
pub use power_law::{PowerLaw, PowerLawModel, TruncatedPowerLaw, TruncatedPowerLawModel};
pub use sampler::InverseCdfSampler;

use crate::error::{Error, Result};
use crate::format::exact;

/// Probability mass on the positive integers.
pub trait DiscreteDistribution {
    /// P(X = k); zero outside the support.
    fn pmf(&self, k: u64) -> f64;

    /// P(X <= k).
    fn cdf(&self, k: u64) -> f64;

    /// P(X > k).
    fn sf(&self, k: u64) -> f64 {
        1.0 - self.cdf(k)
    }

    fn ln_pmf(&self, k: u64) -> f64 {
        self.pmf(k).ln()
    }

    /// Largest k with positive mass, if bounded.
    fn support_max(&self) -> Option<u64> {
        None
    }
}

/// Sum of ln pmf over the sample. An empty sample has log-likelihood 0.
pub fn log_likelihood<D: DiscreteDistribution + ?Sized>(model: &D, sample: &[u64]) -> Result<f64> {
    if sample.contains(&0) {
        return Err(Error::SampleDomain(0));
    }
    Ok(sample.iter().map(|&k| model.ln_pmf(k)).sum())
}

/// A family selectable at run time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    PowerLaw,
    TruncatedPowerLaw,
    DLognormal,
    Hooked,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::PowerLaw => "power_law",
            Family::TruncatedPowerLaw => "truncated_power_law",
            Family::DLognormal => "dlognormal",
            Family::Hooked => "hooked",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "power_law" | "powerlaw" => Ok(Family::PowerLaw),
            "truncated_power_law" => Ok(Family::TruncatedPowerLaw),
            "dlognormal" | "lognormal" => Ok(Family::DLognormal),
            "hooked" => Ok(Family::Hooked),
            other => Err(Error::Usage(format!("unknown model family '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DistributionModel {
    PowerLaw(PowerLaw),
    TruncatedPowerLaw(TruncatedPowerLaw),
    DLognormal(DiscretizedLognormal),
    Hooked(HookedPowerLaw),
}

macro_rules! dispatch {
    ($self:expr, $m:ident => $body:expr) => {
        match $self {
            DistributionModel::PowerLaw($m) => $body,
            DistributionModel::TruncatedPowerLaw($m) => $body,
            DistributionModel::DLognormal($m) => $body,
            DistributionModel::Hooked($m) => $body,
        }
    };
}

impl DiscreteDistribution for DistributionModel {
    fn pmf(&self, k: u64) -> f64 {
        dispatch!(self, m => m.pmf(k))
    }
    fn cdf(&self, k: u64) -> f64 {
        dispatch!(self, m => m.cdf(k))
    }
    fn sf(&self, k: u64) -> f64 {
        dispatch!(self, m => m.sf(k))
    }
    fn ln_pmf(&self, k: u64) -> f64 {
        dispatch!(self, m => m.ln_pmf(k))
    }
    fn support_max(&self) -> Option<u64> {
        dispatch!(self, m => m.support_max())
    }
}

impl DistributionModel {
    pub fn family(&self) -> Family {
        match self {
            DistributionModel::PowerLaw(_) => Family::PowerLaw,
            DistributionModel::TruncatedPowerLaw(_) => Family::TruncatedPowerLaw,
            DistributionModel::DLognormal(_) => Family::DLognormal,
            DistributionModel::Hooked(_) => Family::Hooked,
        }
    }

    /// Named parameters in serialization order.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match self {
            DistributionModel::PowerLaw(m) => vec![("alpha", m.alpha())],
            DistributionModel::TruncatedPowerLaw(m) => {
                vec![("alpha", m.alpha()), ("k_max", m.k_max() as f64)]
            }
            DistributionModel::DLognormal(m) => vec![("mu", m.mu()), ("sigma", m.sigma())],
            DistributionModel::Hooked(m) => vec![("alpha", m.alpha()), ("B", m.offset())],
        }
    }

    /// Builds a model of `family` from named parameters.
    pub fn from_params(family: Family, params: &[(&str, f64)]) -> Result<Self> {
        let get = |name: &str| {
            params
                .iter()
                .find(|(n, _)| *n == name)
                .map(|&(_, v)| v)
                .ok_or_else(|| Error::Parse(format!("{family} model needs parameter '{name}'")))
        };
        Ok(match family {
            Family::PowerLaw => DistributionModel::PowerLaw(PowerLaw::new(get("alpha")?)?),
            Family::TruncatedPowerLaw => {
                let k_max = get("k_max")?;
                if !(k_max >= 1.0 && k_max.fract() == 0.0 && k_max < 1.8e19) {
                    return Err(Error::ParameterDomain(format!(
                        "k_max must be an integer >= 1, got {k_max}"
                    )));
                }
                DistributionModel::TruncatedPowerLaw(TruncatedPowerLaw::new(
                    get("alpha")?,
                    k_max as u64,
                )?)
            }
            Family::DLognormal => {
                DistributionModel::DLognormal(DiscretizedLognormal::new(get("mu")?, get("sigma")?)?)
            }
            Family::Hooked => {
                DistributionModel::Hooked(HookedPowerLaw::new(get("alpha")?, get("B")?)?)
            }
        })
    }

    /// `n` i.i.d. draws by inverse-cdf search, deterministic in `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<u64> {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        InverseCdfSampler::new(self).draw_many(&mut rng, n)
    }
}

impl fmt::Display for DistributionModel {
    /// `family=<name>; param=<value>; ...` with 17 significant digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "family={}", self.family())?;
        for (name, value) in self.params() {
            if name == "k_max" {
                write!(f, "; {name}={}", value as u64)?;
            } else {
                write!(f, "; {name}={}", exact(value))?;
            }
        }
        Ok(())
    }
}

impl FromStr for DistributionModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut family = None;
        let mut params = Vec::new();
        for field in s.split(';').map(str::trim).filter(|f| !f.is_empty()) {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got '{field}'")))?;
            let (key, value) = (key.trim(), value.trim());
            if key == "family" {
                family = Some(value.parse::<Family>()?);
            } else {
                let v: f64 = value
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad value for {key}: '{value}'")))?;
                params.push((key, v));
            }
        }
        let family = family.ok_or_else(|| Error::Parse("model text lacks 'family='".into()))?;
        DistributionModel::from_params(family, &params)
    }
}

impl From<PowerLaw> for DistributionModel {
    fn from(m: PowerLaw) -> Self {
        DistributionModel::PowerLaw(m)
    }
}

impl From<TruncatedPowerLaw> for DistributionModel {
    fn from(m: TruncatedPowerLaw) -> Self {
        DistributionModel::TruncatedPowerLaw(m)
    }
}

impl From<DiscretizedLognormal> for DistributionModel {
    fn from(m: DiscretizedLognormal) -> Self {
        DistributionModel::DLognormal(m)
    }
}

impl From<HookedPowerLaw> for DistributionModel {
    fn from(m: HookedPowerLaw) -> Self {
        DistributionModel::Hooked(m)
    }
}
