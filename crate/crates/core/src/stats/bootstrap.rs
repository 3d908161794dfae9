use alloc::vec::Vec;

use rand::Rng;

use super::StatsError;
use crate::rng::{stream_rng, DYNAMICS_STREAM};

/// Percentile bootstrap interval for the mean at confidence `level`.
pub fn bootstrap_ci(samples: &[f64], level: f64, resamples: usize, seed: u64) -> Result<(f64, f64), StatsError> {
    if samples.len() < 2 {
        return Err(StatsError::TooFewPoints { needed: 2, got: samples.len() });
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(StatsError::InvalidInput("confidence level must lie in (0, 1)"));
    }
    if resamples == 0 {
        return Err(StatsError::InvalidInput("need at least one resample"));
    }
    let mut rng = stream_rng(seed, DYNAMICS_STREAM);
    let len = samples.len();
    let mut means: Vec<f64> = (0..resamples)
        .map(|_| (0..len).map(|_| samples[rng.gen_range(0..len)]).sum::<f64>() / len as f64)
        .collect();
    means.sort_by(f64::total_cmp);
    let tail = (1.0 - level) / 2.0;
    Ok((quantile(&means, tail), quantile(&means, 1.0 - tail)))
}

/// Linear-interpolated quantile of sorted data.
pub(crate) fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = libm::floor(pos) as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}
