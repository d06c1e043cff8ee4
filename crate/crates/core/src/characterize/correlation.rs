//! Cross-channel correlation score: mean of the pairwise Pearson
//! coefficients between channel feature vectors plus `1 / (1 + var)`.

use super::features::{feature_vector, FeatureVector, FEATURE_COUNT};
use super::CharError;
use crate::stats;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CorrelationOptions {
    /// z-score each feature across channels before the Pearson step, so
    /// large-magnitude features (variance, lags) do not dominate.
    pub standardize_features: bool,
}

pub fn correlation_score(channels: &[&[f64]], opts: CorrelationOptions) -> Result<f64, CharError> {
    if channels.len() < 2 {
        return Err(CharError::Univariate);
    }
    let features = channels
        .iter()
        .map(|c| feature_vector(c))
        .collect::<Result<Vec<_>, _>>()?;
    correlation_from_features(&features, opts)
}

pub fn correlation_from_features(
    features: &[FeatureVector],
    opts: CorrelationOptions,
) -> Result<f64, CharError> {
    if features.len() < 2 {
        return Err(CharError::Univariate);
    }
    let rows: Vec<Vec<f64>> = if opts.standardize_features {
        standardize_columns(features)
    } else {
        features.iter().map(|f| f.0.to_vec()).collect()
    };
    let mut coefficients = Vec::new();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            if let Some(r) = stats::pearson(&rows[i], &rows[j]) {
                coefficients.push(r);
            }
        }
    }
    if coefficients.is_empty() {
        return Err(CharError::DegenerateFeatures);
    }
    Ok(stats::mean(&coefficients) + 1.0 / (1.0 + stats::variance(&coefficients)))
}

fn standardize_columns(features: &[FeatureVector]) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = features.iter().map(|f| f.0.to_vec()).collect();
    for k in 0..FEATURE_COUNT {
        let col: Vec<f64> = rows.iter().map(|r| r[k]).collect();
        let m = stats::mean(&col);
        let sd = stats::std_dev(&col);
        for r in &mut rows {
            r[k] = if sd > 0.0 { (r[k] - m) / sd } else { 0.0 };
        }
    }
    rows
}
