//! Transition: trace of the column covariance of a 3-symbol transition
//! matrix, computed on the series downsampled at its first ACF zero.
//!
//! Symbols are equiprobable rank bins: the point of rank `r` (0-based,
//! ties broken by time index) among `T'` points gets `min(2, floor(3r/T'))`.

use super::acf::first_zero_acf;
use super::CharError;

pub const MIN_DOWNSAMPLED_LEN: usize = 6;

pub fn transition_value(x: &[f64]) -> Result<f64, CharError> {
    let tau = first_zero_acf(x)?;
    transition_value_with_stride(x, tau)
}

/// Like [`transition_value`], but the stride is capped at
/// `T / MIN_DOWNSAMPLED_LEN` so strongly persistent series (random walks,
/// whose ACF decays slowly) still keep enough points to score.
pub fn transition_value_capped(x: &[f64]) -> Result<f64, CharError> {
    let tau = first_zero_acf(x)?;
    transition_value_with_stride(x, tau.min(x.len() / MIN_DOWNSAMPLED_LEN))
}

/// The transition score for an explicit downsampling stride.
pub fn transition_value_with_stride(x: &[f64], tau: usize) -> Result<f64, CharError> {
    let y: Vec<f64> = x.iter().step_by(tau.max(1)).copied().collect();
    let n = y.len();
    if n < MIN_DOWNSAMPLED_LEN {
        return Err(CharError::TooShortAfterDownsample { stride: tau, len: n });
    }
    let symbols = rank_symbols(&y);
    let mut m = [[0.0f64; 3]; 3];
    for w in symbols.windows(2) {
        m[w[0]][w[1]] += 1.0;
    }
    for row in &mut m {
        for v in row.iter_mut() {
            *v /= n as f64;
        }
    }
    // population variance of each column (the trace of the covariance)
    let trace = (0..3)
        .map(|c| {
            let col = [m[0][c], m[1][c], m[2][c]];
            let mean = col.iter().sum::<f64>() / 3.0;
            col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / 3.0
        })
        .sum();
    Ok(trace)
}

pub(crate) fn rank_symbols(y: &[f64]) -> Vec<usize> {
    let n = y.len();
    let mut order: Vec<usize> = (0..n).collect();
    // stable sort keeps index order among ties
    order.sort_by(|&a, &b| y[a].total_cmp(&y[b]));
    let mut symbols = vec![0usize; n];
    for (rank, &idx) in order.iter().enumerate() {
        symbols[idx] = (rank * 3 / n).min(2);
    }
    symbols
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn capped_stride_scores_persistent_series() {
        let walk: Vec<f64> = (0..400).map(|i| ((i as f64) * 0.01).sqrt() * 10.0 + ((i * 37 % 11) as f64) * 0.01).collect();
        assert!(matches!(transition_value(&walk), Err(CharError::TooShortAfterDownsample { .. })));
        let v = transition_value_capped(&walk).unwrap();
        assert!((0.0..=1.0 / 3.0).contains(&v));
        let x: Vec<f64> = (0..200).map(|i| (i as f64 * 0.9).sin()).collect();
        assert_eq!(transition_value_capped(&x).unwrap(), transition_value(&x).unwrap());
    }

    #[test]
    fn repeated_one_two_three() {
        // symbols 0,1,2 repeating; counts 0->1: 4, 1->2: 4, 2->0: 3 over T'=12
        // columns (0,0,1/4), (1/3,0,0), (0,1/3,0):
        // variances 1/72 + 2/81 + 2/81 = 0.0632716...
        let x: Vec<f64> = [1.0, 2.0, 3.0].repeat(4);
        assert_eq!(first_zero_acf(&x).unwrap(), 1);
        let d = transition_value(&x).unwrap();
        let expected = 1.0 / 72.0 + 4.0 / 81.0;
        assert!((d - expected).abs() < 1e-15);
        assert!((d - 0.0633).abs() < 1e-4);
    }

    #[test]
    fn rank_symbols_break_ties_by_index() {
        assert_eq!(rank_symbols(&[5.0, 5.0, 5.0, 5.0, 5.0, 5.0]), vec![0, 0, 1, 1, 2, 2]);
        assert_eq!(rank_symbols(&[3.0, 1.0, 2.0]), vec![2, 0, 1]);
    }

    #[test]
    fn too_short_after_downsample() {
        assert!(matches!(
            transition_value_with_stride(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0], 2),
            Err(CharError::TooShortAfterDownsample { .. })
        ));
        assert!(matches!(
            transition_value(&[1.0, 3.0, 2.0, 4.0, 0.0]),
            Err(CharError::TooShortAfterDownsample { .. })
        ));
    }

    proptest! {
        #[test]
        fn bounded(x in prop::collection::vec(-50.0f64..50.0, 6..150)) {
            if let Ok(d) = transition_value(&x) {
                prop_assert!((0.0..=1.0 / 3.0).contains(&d));
            }
        }

        #[test]
        fn monotone_transform_with_fixed_stride(x in prop::collection::vec(-3.0f64..3.0, 12..100)) {
            let y: Vec<f64> = x.iter().map(|v| v.exp() * 2.0 + v.powi(3)).collect();
            prop_assert_eq!(
                transition_value_with_stride(&x, 2).unwrap(),
                transition_value_with_stride(&y, 2).unwrap()
            );
        }

        #[test]
        fn positive_affine_invariant(x in prop::collection::vec(-3.0f64..3.0, 12..100), a in 0.5f64..4.0, b in -5.0f64..5.0) {
            let y: Vec<f64> = x.iter().map(|v| a * v + b).collect();
            let (tx, ty) = (first_zero_acf(&x), first_zero_acf(&y));
            if let (Ok(tx), Ok(ty)) = (tx, ty) {
                prop_assume!(tx == ty);
                prop_assert_eq!(transition_value(&x), transition_value(&y));
            }
        }
    }
}
