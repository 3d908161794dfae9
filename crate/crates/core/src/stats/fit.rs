//! Least-squares fits of mean lifetime against system size, used to tell
//! bounded, logarithmic, polynomial and stretched-exponential growth apart.
//!
//! All four families are fitted on `ln T`:
//!
//! | family        | model            | free parameters |
//! |---------------|------------------|-----------------|
//! | constant      | `T = c`          | 1               |
//! | logarithmic   | `T = c · ln n`   | 1               |
//! | power law     | `T = c · n^k`    | 2               |
//! | stretched exp | `ln T = c · n^a` | 2 (`a` on a grid) |
//!
//! The winner minimizes the small-sample corrected AIC of the log residuals.

use alloc::vec::Vec;

use super::StatsError;

/// Exponents tried for the stretched-exponential family.
pub const STRETCHED_EXPONENT_GRID: [f64; 10] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

/// Residual sum of squares below this (per point) counts as an exact fit.
const RSS_FLOOR_PER_POINT: f64 = 1e-20;
const Z_975: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingPoint {
    pub n: f64,
    pub mean: f64,
    /// Standard error of `mean`; `0` when unknown.
    pub stderr: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ScalingFamily {
    Constant,
    Logarithmic,
    PowerLaw,
    StretchedExponential,
}

impl ScalingFamily {
    pub const fn parameter_count(self) -> usize {
        match self {
            Self::Constant | Self::Logarithmic => 1,
            Self::PowerLaw | Self::StretchedExponential => 2,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            Self::Constant => "constant",
            Self::Logarithmic => "logarithmic",
            Self::PowerLaw => "power_law",
            Self::StretchedExponential => "stretched_exponential",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyFit {
    pub family: ScalingFamily,
    /// `c` in the table above.
    pub scale: f64,
    /// `k` for the power law, `a` for the stretched exponential, `0` otherwise.
    pub exponent: f64,
    pub rss: f64,
    /// Information criterion; lower is better, `+∞` if the family cannot be fitted.
    pub criterion: f64,
}

impl FamilyFit {
    /// Fitted `ln T` at size `n`.
    pub fn predict_log(&self, n: f64) -> f64 {
        match self.family {
            ScalingFamily::Constant => libm::log(self.scale),
            ScalingFamily::Logarithmic => libm::log(self.scale) + libm::log(libm::log(n)),
            ScalingFamily::PowerLaw => libm::log(self.scale) + self.exponent * libm::log(n),
            ScalingFamily::StretchedExponential => self.scale * libm::pow(n, self.exponent),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub best: ScalingFamily,
    pub fits: Vec<FamilyFit>,
    /// Power-law exponent `k` and its 95% confidence interval.
    pub power_exponent: f64,
    pub power_exponent_ci: (f64, f64),
}

impl ScalingFit {
    pub fn fit_for(&self, family: ScalingFamily) -> &FamilyFit {
        self.fits.iter().find(|f| f.family == family).expect("every family is fitted")
    }
}

/// Fits every family and picks the best by corrected AIC.
///
/// The power-law exponent interval uses the supplied standard errors when all
/// are positive (weighted fit with `Var ln T ≈ (se/T)²`, widened by the
/// reduced chi-square when the scatter exceeds them); otherwise an ordinary
/// least-squares Student-t interval.
pub fn fit_scaling(points: &[ScalingPoint]) -> Result<ScalingFit, StatsError> {
    if points.len() < 3 {
        return Err(StatsError::TooFewPoints { needed: 3, got: points.len() });
    }
    if points.iter().any(|p| !(p.n > 0.0) || !(p.mean > 0.0) || !p.n.is_finite() || !p.mean.is_finite()) {
        return Err(StatsError::InvalidInput("sizes and means must be positive and finite"));
    }
    if points.iter().any(|p| !(p.stderr >= 0.0)) {
        return Err(StatsError::InvalidInput("standard errors must be non-negative"));
    }
    if points.iter().all(|p| p.n == points[0].n) {
        return Err(StatsError::DegenerateSizes);
    }

    let y: Vec<f64> = points.iter().map(|p| libm::log(p.mean)).collect();
    let log_n: Vec<f64> = points.iter().map(|p| libm::log(p.n)).collect();
    let count = points.len();

    let mut fits = Vec::with_capacity(4);

    let c = super::mean(&y);
    fits.push(finish(ScalingFamily::Constant, libm::exp(c), 0.0, rss(&y, |_| c), count));

    if log_n.iter().all(|&l| l > 0.0) {
        let lll: Vec<f64> = log_n.iter().map(|&l| libm::log(l)).collect();
        let shift = super::mean(&y.iter().zip(&lll).map(|(a, b)| a - b).collect::<Vec<_>>());
        let r = rss(&y, |i| shift + lll[i]);
        fits.push(finish(ScalingFamily::Logarithmic, libm::exp(shift), 0.0, r, count));
    } else {
        fits.push(unfittable(ScalingFamily::Logarithmic));
    }

    let (intercept, slope) = ols(&log_n, &y);
    let r = rss(&y, |i| intercept + slope * log_n[i]);
    fits.push(finish(ScalingFamily::PowerLaw, libm::exp(intercept), slope, r, count));

    let mut stretched = unfittable(ScalingFamily::StretchedExponential);
    for &a in &STRETCHED_EXPONENT_GRID {
        let z: Vec<f64> = points.iter().map(|p| libm::pow(p.n, a)).collect();
        let zz: f64 = z.iter().map(|v| v * v).sum();
        let c = y.iter().zip(&z).map(|(a, b)| a * b).sum::<f64>() / zz;
        let r = rss(&y, |i| c * z[i]);
        if r < stretched.rss {
            stretched = finish(ScalingFamily::StretchedExponential, c, a, r, count);
        }
    }
    fits.push(stretched);

    let best = fits
        .iter()
        .min_by(|a, b| {
            a.criterion
                .partial_cmp(&b.criterion)
                .unwrap_or(core::cmp::Ordering::Equal)
                .then(a.family.parameter_count().cmp(&b.family.parameter_count()))
                .then(a.family.cmp(&b.family))
        })
        .map(|f| f.family)
        .unwrap_or(ScalingFamily::Constant);

    let (power_exponent, half_width) = exponent_interval(points, &log_n, &y, slope, r_of(&fits, ScalingFamily::PowerLaw));
    Ok(ScalingFit {
        best,
        fits,
        power_exponent,
        power_exponent_ci: (power_exponent - half_width, power_exponent + half_width),
    })
}

fn r_of(fits: &[FamilyFit], family: ScalingFamily) -> f64 {
    fits.iter().find(|f| f.family == family).map_or(f64::INFINITY, |f| f.rss)
}

fn unfittable(family: ScalingFamily) -> FamilyFit {
    FamilyFit { family, scale: f64::NAN, exponent: f64::NAN, rss: f64::INFINITY, criterion: f64::INFINITY }
}

fn finish(family: ScalingFamily, scale: f64, exponent: f64, rss: f64, count: usize) -> FamilyFit {
    FamilyFit { family, scale, exponent, rss, criterion: aicc(rss, count, family.parameter_count()) }
}

fn aicc(rss: f64, count: usize, params: usize) -> f64 {
    let n = count as f64;
    let k = params as f64;
    let floor = RSS_FLOOR_PER_POINT * n;
    let base = n * libm::log(rss.max(floor) / n) + 2.0 * k;
    let dof = count as isize - params as isize - 1;
    if dof > 0 {
        base + 2.0 * k * (k + 1.0) / dof as f64
    } else {
        base
    }
}

fn rss(y: &[f64], model: impl Fn(usize) -> f64) -> f64 {
    y.iter().enumerate().map(|(i, v)| (v - model(i)) * (v - model(i))).sum()
}

fn ols(x: &[f64], y: &[f64]) -> (f64, f64) {
    let mx = super::mean(x);
    let my = super::mean(y);
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    (my - slope * mx, slope)
}

fn exponent_interval(points: &[ScalingPoint], x: &[f64], y: &[f64], ols_slope: f64, ols_rss: f64) -> (f64, f64) {
    let count = points.len();
    let dof = (count - 2) as f64;
    if points.iter().all(|p| p.stderr > 0.0) {
        let w: Vec<f64> = points.iter().map(|p| (p.mean / p.stderr) * (p.mean / p.stderr)).collect();
        let sw: f64 = w.iter().sum();
        let mx = w.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() / sw;
        let my = w.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() / sw;
        let sxx: f64 = w.iter().zip(x).map(|(wi, xi)| wi * (xi - mx) * (xi - mx)).sum();
        let sxy: f64 = w.iter().zip(x.iter().zip(y)).map(|(wi, (xi, yi))| wi * (xi - mx) * (yi - my)).sum();
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let chi2: f64 = w
            .iter()
            .zip(x.iter().zip(y))
            .map(|(wi, (xi, yi))| wi * (yi - intercept - slope * xi) * (yi - intercept - slope * xi))
            .sum();
        let inflation = (chi2 / dof).max(1.0);
        (slope, Z_975 * libm::sqrt(inflation / sxx))
    } else {
        let mx = super::mean(x);
        let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
        let se = libm::sqrt(ols_rss / dof / sxx);
        (ols_slope, student_t_975(count - 2) * se)
    }
}

/// Two-sided 95% Student-t quantile.
fn student_t_975(dof: usize) -> f64 {
    const TABLE: [f64; 10] = [12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228];
    if (1..=TABLE.len()).contains(&dof) {
        return TABLE[dof - 1];
    }
    // Cornish-Fisher expansion around the normal quantile
    let z = Z_975;
    let d = dof as f64;
    z + (z * z * z + z) / (4.0 * d) + (5.0 * libm::pow(z, 5.0) + 16.0 * z * z * z + 3.0 * z) / (96.0 * d * d)
}
