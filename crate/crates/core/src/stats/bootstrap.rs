use crate::rng::SplitMix64;

use super::StatsError;

pub const DEFAULT_RESAMPLES: usize = 10_000;

/// Percentile bootstrap interval for the mean.
///
/// Resample `r` draws from its own stream `SplitMix64::stream(seed, r)`, so the
/// result does not depend on evaluation order.
pub fn bootstrap_ci(values: &[f64], resamples: usize, level: f64, seed: u64) -> Result<(f64, f64), StatsError> {
    if values.is_empty() || resamples == 0 {
        return Err(StatsError::Empty);
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(StatsError::InvalidLevel(level));
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite(i));
    }
    let n = values.len();
    // Shifting by the first value makes a constant input exact.
    let shift = values[0];
    let mut means: Vec<f64> = (0..resamples)
        .map(|r| {
            let mut rng = SplitMix64::stream(seed, r as u64);
            let s: f64 = (0..n).map(|_| values[rng.below(n as u64) as usize] - shift).sum();
            shift + s / n as f64
        })
        .collect();
    means.sort_by(f64::total_cmp);
    let alpha = (1.0 - level) / 2.0;
    Ok((percentile(&means, alpha), percentile(&means, 1.0 - alpha)))
}

/// Linear interpolation between order statistics of sorted data.
fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}
