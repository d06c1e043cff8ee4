//! Variance-based series selection: keep the fewest highest-variance series
//! whose combined variance reaches a target share of the total.

use super::CharError;
use crate::stats;

pub const DEFAULT_EXPLAINED_VARIANCE: f64 = 0.9;

/// Indices of the selected series, in descending-variance order.
pub fn pfa_select(collection: &[&[f64]], threshold: f64) -> Result<Vec<usize>, CharError> {
    if collection.is_empty() {
        return Err(CharError::EmptyCollection);
    }
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(CharError::InvalidArgument(format!("threshold {threshold} outside (0, 1]")));
    }
    let variances: Vec<f64> = collection.iter().map(|s| stats::variance(s)).collect();
    pfa_select_by_variance(&variances, threshold)
}

pub fn pfa_select_by_variance(variances: &[f64], threshold: f64) -> Result<Vec<usize>, CharError> {
    if variances.is_empty() {
        return Err(CharError::EmptyCollection);
    }
    let mut order: Vec<usize> = (0..variances.len()).collect();
    order.sort_by(|&a, &b| variances[b].total_cmp(&variances[a]));
    let total: f64 = variances.iter().sum();
    let mut selected = Vec::new();
    let mut acc = 0.0;
    for idx in order {
        selected.push(idx);
        acc += variances[idx];
        if total <= 0.0 || acc / total >= threshold {
            break;
        }
    }
    Ok(selected)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn greedy_examples() {
        // cumulative ratios 0.5, 0.8, 1.0
        assert_eq!(pfa_select_by_variance(&[5.0, 3.0, 2.0], 0.9).unwrap(), vec![0, 1, 2]);
        assert_eq!(pfa_select_by_variance(&[5.0, 3.0, 2.0], 0.5).unwrap(), vec![0]);
        assert_eq!(pfa_select_by_variance(&[2.0, 5.0, 3.0], 0.8).unwrap(), vec![1, 2]);
    }

    #[test]
    fn single_and_empty() {
        let s = [1.0, 2.0, 3.0];
        assert_eq!(pfa_select(&[&s], 0.1).unwrap(), vec![0]);
        assert_eq!(pfa_select(&[], 0.9), Err(CharError::EmptyCollection));
        assert!(pfa_select(&[&s], 0.0).is_err());
    }

    #[test]
    fn zero_total_variance_keeps_one() {
        let c = [1.0; 5];
        assert_eq!(pfa_select(&[&c, &c], 0.9).unwrap(), vec![0]);
    }
}
