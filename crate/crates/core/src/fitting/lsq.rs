use crate::error::{Error, Result};
use crate::histogram::MentionHistogram;
use crate::models::{PowerLawModel, TruncatedPowerLawModel};

/// Ordinary least squares y = intercept + slope * x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination; 1 when y has no variance to explain.
    pub r_squared: f64,
}

pub fn linear_regression(points: &[(f64, f64)]) -> Result<LinearFit> {
    if points.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "regression needs at least 2 points, got {}",
            points.len()
        )));
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (dx, dy) = (x - mean_x, y - mean_y);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::InsufficientData(
            "regression needs two distinct x values".into(),
        ));
    }
    let slope = sxy / sxx;
    let r_squared = if points.len() == 2 || syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok(LinearFit {
        slope,
        intercept: mean_y - slope * mean_x,
        r_squared,
    })
}

/// (ln k, ln N(k)) for every stored level, ascending k.
pub fn loglog_points(hist: &MentionHistogram) -> Vec<(f64, f64)> {
    hist.iter()
        .map(|(k, n)| ((k as f64).ln(), (n as f64).ln()))
        .collect()
}

/// Logarithmic binning: integer bins with edges floor(10^(i / per_decade)),
/// each non-empty bin giving (ln of the geometric bin centre, ln of papers
/// per integer level in the bin).
pub fn log_binned_points(hist: &MentionHistogram, per_decade: u32) -> Vec<(f64, f64)> {
    let Some(max_k) = hist.max_k() else {
        return Vec::new();
    };
    let per_decade = per_decade.max(1);
    let mut edges: Vec<u64> = vec![1];
    let mut i = 1;
    while *edges.last().expect("non-empty") <= max_k {
        let e = 10f64.powf(i as f64 / per_decade as f64).floor() as u64;
        if e > *edges.last().expect("non-empty") {
            edges.push(e);
        }
        i += 1;
    }
    let mut bins = hist.iter().peekable();
    let mut points = Vec::new();
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mut papers = 0u64;
        while let Some(&(k, n)) = bins.peek() {
            if k >= hi {
                break;
            }
            papers += n;
            bins.next();
        }
        if papers > 0 {
            let centre = 0.5 * ((lo as f64).ln() + ((hi - 1) as f64).ln());
            points.push((centre, (papers as f64 / (hi - lo) as f64).ln()));
        }
    }
    points
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LsqOptions {
    /// Regress on logarithmically binned densities instead of raw levels.
    pub log_bins_per_decade: Option<u32>,
}

/// A straight-line fit to a size-frequency histogram in log-log space.
#[derive(Debug, Clone, PartialEq)]
pub struct LsqFitResult {
    /// Fitted line; `alpha` is minus the slope and may be non-positive when
    /// the data do not decrease.
    pub model: PowerLawModel,
    pub r_squared: f64,
    /// Papers in the fitted histogram.
    pub n_points: u64,
    /// Regression points (distinct levels, or log bins).
    pub n_bins: usize,
    /// Upper support bound when the histogram was truncated.
    pub k_max: Option<u64>,
    /// 100 * (R^2 truncated - R^2 full) / R^2 full, for truncated fits.
    pub pct_r2_change: Option<f64>,
}

impl LsqFitResult {
    pub fn truncated(&self) -> bool {
        self.k_max.is_some()
    }

    pub fn slope(&self) -> f64 {
        -self.model.alpha
    }

    pub fn truncated_model(&self) -> Option<TruncatedPowerLawModel> {
        self.k_max.map(|k_max| TruncatedPowerLawModel {
            base: self.model,
            k_max,
        })
    }

    /// The points the regression used.
    pub fn points(hist: &MentionHistogram, opts: &LsqOptions) -> Vec<(f64, f64)> {
        match opts.log_bins_per_decade {
            Some(b) => log_binned_points(hist, b),
            None => loglog_points(hist),
        }
    }
}

/// Unweighted OLS of ln N(k) on ln k over the stored levels.
pub fn loglog_fit(hist: &MentionHistogram) -> Result<LsqFitResult> {
    loglog_fit_with(hist, &LsqOptions::default())
}

pub fn loglog_fit_with(hist: &MentionHistogram, opts: &LsqOptions) -> Result<LsqFitResult> {
    if hist.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "log-log fit needs at least 3 distinct mention levels, got {}",
            hist.len()
        )));
    }
    let points = LsqFitResult::points(hist, opts);
    if points.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "log-log fit needs at least 3 regression points, got {}",
            points.len()
        )));
    }
    let fit = linear_regression(&points)?;
    Ok(LsqFitResult {
        model: PowerLawModel {
            amplitude: fit.intercept.exp(),
            alpha: -fit.slope,
        },
        r_squared: fit.r_squared,
        n_points: hist.total_papers(),
        n_bins: points.len(),
        k_max: None,
        pct_r2_change: None,
    })
}
