//! Sample autocorrelation.
//!
//! Lag-k autocovariance is averaged over its `T - k` overlapping pairs and
//! divided by the lag-0 autocovariance, so a perfectly alternating series
//! has `acf[1] = -1` exactly.

use super::CharError;
use crate::stats;

pub fn acf(x: &[f64], max_lag: usize) -> Result<Vec<f64>, CharError> {
    let n = x.len();
    if n < 2 {
        return Err(CharError::TooShort { needed: 2, actual: n });
    }
    if max_lag == 0 || max_lag >= n {
        return Err(CharError::InvalidArgument(format!(
            "max_lag must be in [1, {}), got {max_lag}",
            n
        )));
    }
    if stats::is_constant(x) {
        return Err(CharError::DegenerateVariance);
    }
    let m = stats::mean(x);
    let d: Vec<f64> = x.iter().map(|v| v - m).collect();
    let c0 = d.iter().map(|v| v * v).sum::<f64>() / n as f64;
    if c0 == 0.0 {
        return Err(CharError::DegenerateVariance);
    }
    let mut out = Vec::with_capacity(max_lag + 1);
    out.push(1.0);
    for k in 1..=max_lag {
        let ck = d[..n - k].iter().zip(&d[k..]).map(|(a, b)| a * b).sum::<f64>() / (n - k) as f64;
        out.push(ck / c0);
    }
    Ok(out)
}

/// Largest lag searched for a crossing: `min(T - 1, T / 2)`.
pub fn zero_crossing_cap(len: usize) -> usize {
    (len - 1).min(len / 2).max(1)
}

/// Smallest lag `>= 1` whose autocorrelation is `<= 0`, or the search cap
/// when no crossing occurs.
pub fn first_zero_acf(x: &[f64]) -> Result<usize, CharError> {
    if x.len() < 3 {
        return Err(CharError::TooShort { needed: 3, actual: x.len() });
    }
    let cap = zero_crossing_cap(x.len());
    let r = acf(x, cap)?;
    Ok((1..=cap).find(|&k| r[k] <= 0.0).unwrap_or(cap))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alternating(n: usize) -> Vec<f64> {
        (0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect()
    }

    #[test]
    fn lag_zero_is_one() {
        let r = acf(&[1.0, 3.0, 2.0, 5.0, 4.0], 3).unwrap();
        assert_eq!(r[0], 1.0);
        assert_eq!(r.len(), 4);
    }

    #[test]
    fn alternating_lag_one() {
        let r = acf(&alternating(100), 1).unwrap();
        assert!((r[1] + 1.0).abs() < 1e-6);
        assert_eq!(first_zero_acf(&alternating(100)).unwrap(), 1);
    }

    #[test]
    fn constant_is_degenerate() {
        assert_eq!(acf(&[2.0; 10], 3), Err(CharError::DegenerateVariance));
        assert_eq!(first_zero_acf(&[2.0; 10]), Err(CharError::DegenerateVariance));
    }

    #[test]
    fn bad_lag() {
        assert!(acf(&[1.0, 2.0, 3.0], 3).is_err());
        assert!(acf(&[1.0, 2.0, 3.0], 0).is_err());
    }

    // Brute force: autocovariance at each lag computed from the definition
    // over explicit index pairs.
    fn oracle_acf(x: &[f64], k: usize) -> f64 {
        let n = x.len() as f64;
        let m = x.iter().sum::<f64>() / n;
        let c0 = x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n;
        let mut ck = 0.0;
        let mut pairs = 0.0;
        for i in 0..x.len() {
            for j in 0..x.len() {
                if j == i + k {
                    ck += (x[i] - m) * (x[j] - m);
                    pairs += 1.0;
                }
            }
        }
        ck / pairs / c0
    }

    #[test]
    fn matches_pairwise_oracle() {
        let x: Vec<f64> = (0..40).map(|i| ((i * 7919) % 31) as f64 + 0.5 * (i as f64).sin()).collect();
        let r = acf(&x, 15).unwrap();
        for (k, rk) in r.iter().enumerate() {
            assert!((rk - oracle_acf(&x, k)).abs() < 1e-12, "lag {k}");
        }
    }

    #[test]
    fn sine_crosses_just_after_quarter_period() {
        // The lag-3 value of a period-12 sine is a small positive number in
        // finite samples (0.0073 at T=240), so the first lag with acf <= 0 is 4.
        let x: Vec<f64> = (0..240).map(|i| (2.0 * std::f64::consts::PI * i as f64 / 12.0).sin()).collect();
        let r = acf(&x, 4).unwrap();
        assert!(r[3] > 0.0 && r[3] < 0.01);
        assert!(r[4] < 0.0);
        assert_eq!(first_zero_acf(&x).unwrap(), 4);
    }

    #[test]
    fn ramp_crosses_before_cap() {
        // For 0..19 the lag-8 autocovariance sum is -49 (hand computation),
        // lag 7 still +22.75, so the crossing is at 8 rather than the cap 10.
        let x: Vec<f64> = (0..20).map(|i| i as f64).collect();
        assert_eq!(zero_crossing_cap(20), 10);
        assert_eq!(first_zero_acf(&x).unwrap(), 8);
    }

    #[test]
    fn no_crossing_returns_cap() {
        // acf at lags 1..4 is positive for this upward drifting series
        let x = [0.1, 0.5, 0.3, 1.9, 2.1, 1.4, 1.2, 3.3];
        let r = acf(&x, 4).unwrap();
        assert!(r[1..].iter().all(|&v| v > 0.0));
        assert_eq!(first_zero_acf(&x).unwrap(), 4);
    }
}
