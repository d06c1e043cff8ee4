//! Shifting: how far the bulk of the mass moves along the time axis as the
//! value threshold rises.
//!
//! z-score the series, lay `m` evenly spaced thresholds from the minimum
//! upwards, take the median 1-based time index of the points strictly above
//! each threshold, min-max normalise those medians and return their median.

use super::CharError;
use crate::stats;

pub const DEFAULT_THRESHOLDS: usize = 100;

pub fn shifting_value(x: &[f64], m: usize) -> Result<f64, CharError> {
    if x.len() < 3 {
        return Err(CharError::TooShort { needed: 3, actual: x.len() });
    }
    if m < 2 {
        return Err(CharError::InvalidArgument(format!("need at least 2 thresholds, got {m}")));
    }
    let z = stats::zscore(x).ok_or(CharError::DegenerateVariance)?;
    let zmin = z.iter().copied().fold(f64::INFINITY, f64::min);
    let zmax = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let step = (zmax - zmin) / m as f64;

    let medians: Vec<f64> = (0..m)
        .filter_map(|i| {
            let s = zmin + i as f64 * step;
            let above: Vec<f64> = z
                .iter()
                .enumerate()
                .filter(|(_, &zj)| zj > s)
                .map(|(j, _)| (j + 1) as f64)
                .collect();
            // indices are already sorted
            (!above.is_empty()).then(|| sorted_median(&above))
        })
        .collect();
    if medians.is_empty() {
        return Ok(0.0);
    }
    let lo = medians.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = medians.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi == lo {
        return Ok(0.0);
    }
    let normalised: Vec<f64> = medians.iter().map(|v| (v - lo) / (hi - lo)).collect();
    Ok(stats::median(&normalised))
}

fn sorted_median(v: &[f64]) -> f64 {
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
