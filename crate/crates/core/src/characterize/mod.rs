//! The six dataset characteristics (trend, seasonality, stationarity,
//! shifting, transition, correlation), plus variance-based series
//! selection and characteristic flags.

use serde::Serialize;
use thiserror::Error;

pub mod acf;
pub mod adf;
pub mod classify;
pub mod correlation;
pub mod features;
pub mod pfa;
pub mod shifting;
pub mod stl;
pub mod transition;

pub use acf::{acf, first_zero_acf};
pub use adf::{adf_pvalue, adf_test, adf_test_with_lags, stationarity, AdfResult};
pub use classify::{classify_characteristics, CharacteristicFlags, Thresholds};
pub use correlation::{correlation_score, CorrelationOptions};
pub use features::{feature_vector, FeatureVector, FEATURE_COUNT, FEATURE_NAMES};
pub use pfa::{pfa_select, pfa_select_by_variance};
pub use shifting::shifting_value;
pub use stl::{stl_decompose, stl_decompose_with, Decomposition, StlParams};
pub use transition::{transition_value, transition_value_capped};

use crate::model::Dataset;
use crate::stats;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CharError {
    #[error("series too short: need at least {needed} points, got {actual}")]
    TooShort { needed: usize, actual: usize },
    #[error("series has zero variance")]
    DegenerateVariance,
    #[error("downsampling with stride {stride} leaves only {len} points")]
    TooShortAfterDownsample { stride: usize, len: usize },
    #[error("correlation needs at least two channels")]
    Univariate,
    #[error("every channel pair has a constant feature vector")]
    DegenerateFeatures,
    #[error("collection is empty")]
    EmptyCollection,
    #[error("regression design is singular")]
    SingularRegression,
    #[error("{0}")]
    InvalidArgument(String),
}

/// Explained-variance strength `max(0, 1 - var(R) / var(X - C))` where `C`
/// is the component being tested against. Zero when `var(X - C) = 0`.
fn strength(x: &[f64], component: &[f64], remainder: &[f64]) -> f64 {
    let adjusted: Vec<f64> = x.iter().zip(component).map(|(a, b)| a - b).collect();
    let denom = stats::variance(&adjusted);
    if denom <= 0.0 {
        return 0.0;
    }
    (1.0 - stats::variance(remainder) / denom).clamp(0.0, 1.0)
}

pub fn trend_strength_of(x: &[f64], d: &Decomposition) -> f64 {
    strength(x, &d.seasonal, &d.remainder)
}

pub fn seasonality_strength_of(x: &[f64], d: &Decomposition) -> f64 {
    strength(x, &d.trend, &d.remainder)
}

pub fn trend_strength(x: &[f64], period: usize) -> Result<f64, CharError> {
    stl_decompose(x, period).map(|d| trend_strength_of(x, &d))
}

pub fn seasonality_strength(x: &[f64], period: usize) -> Result<f64, CharError> {
    stl_decompose(x, period).map(|d| seasonality_strength_of(x, &d))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharacteristicProfile {
    pub trend_strength: f64,
    pub seasonality_strength: f64,
    pub stationary: bool,
    pub adf_pvalue: f64,
    pub shifting: f64,
    pub transition: f64,
    pub correlation: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileOptions {
    pub shifting_thresholds: usize,
    pub correlation: CorrelationOptions,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        Self { shifting_thresholds: shifting::DEFAULT_THRESHOLDS, correlation: CorrelationOptions::default() }
    }
}

/// Scores one series. Series shorter than two full cycles plus one point
/// are decomposed without a seasonal component, and the transition stride
/// is capped as in [`transition_value_capped`].
pub fn profile_series(x: &[f64], period: usize, opts: &ProfileOptions) -> Result<CharacteristicProfile, CharError> {
    let period = if x.len() < 2 * period + 1 { 1 } else { period };
    let d = stl_decompose(x, period)?;
    let p = robust_adf_pvalue(x)?;
    Ok(CharacteristicProfile {
        trend_strength: trend_strength_of(x, &d),
        seasonality_strength: seasonality_strength_of(x, &d),
        stationary: adf::is_stationary_pvalue(p),
        adf_pvalue: p,
        shifting: shifting_value(x, opts.shifting_thresholds)?,
        transition: transition_value_capped(x)?,
        correlation: None,
    })
}

/// ADF p-value with the Schwert lag order, stepping the order down only if
/// the augmented regression is singular (exactly periodic or otherwise
/// noiseless series satisfy a linear recurrence).
fn robust_adf_pvalue(x: &[f64]) -> Result<f64, CharError> {
    let mut lags = adf::schwert_lags(x.len());
    loop {
        match adf::adf_test_with_lags(x, lags) {
            Err(CharError::SingularRegression) if lags > 0 => lags -= 1,
            other => return other.map(|r| r.pvalue),
        }
    }
}

/// Per-channel profiles and feature vectors of a dataset plus the
/// dataset-level summary.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetProfile {
    pub channels: Vec<CharacteristicProfile>,
    pub features: Vec<FeatureVector>,
    pub summary: CharacteristicProfile,
}

/// Dataset-level scores are channel means; the p-value is the mean
/// channel p-value and stationarity is decided on it. Correlation is set
/// for multivariate datasets.
pub fn profile_dataset(ds: &Dataset, opts: &ProfileOptions) -> Result<DatasetProfile, CharError> {
    let period = ds.seasonal_period();
    let channels = ds
        .channels()
        .iter()
        .map(|c| profile_series(c.values(), period, opts))
        .collect::<Result<Vec<_>, _>>()?;
    let features = ds
        .channels()
        .iter()
        .map(|c| feature_vector(c.values()))
        .collect::<Result<Vec<_>, _>>()?;
    let avg = |f: fn(&CharacteristicProfile) -> f64| stats::mean(&channels.iter().map(f).collect::<Vec<_>>());
    let pvalue = avg(|p| p.adf_pvalue);
    let correlation = if features.len() > 1 {
        Some(correlation::correlation_from_features(&features, opts.correlation)?)
    } else {
        None
    };
    let summary = CharacteristicProfile {
        trend_strength: avg(|p| p.trend_strength),
        seasonality_strength: avg(|p| p.seasonality_strength),
        stationary: adf::is_stationary_pvalue(pvalue),
        adf_pvalue: pvalue,
        shifting: avg(|p| p.shifting),
        transition: avg(|p| p.transition),
        correlation,
    };
    Ok(DatasetProfile { channels, features, summary })
}

/// One exported row: scores, features and flags for a named series.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileRecord {
    pub series: String,
    pub profile: CharacteristicProfile,
    pub features: FeatureVector,
    pub flags: CharacteristicFlags,
}

pub fn profile_records(ds: &Dataset, dp: &DatasetProfile, thresholds: &Thresholds) -> Vec<ProfileRecord> {
    ds.channel_names()
        .iter()
        .zip(dp.channels.iter().zip(&dp.features))
        .map(|(name, (p, f))| ProfileRecord {
            series: format!("{}/{}", ds.name(), name),
            profile: *p,
            features: f.clone(),
            flags: classify_characteristics(p, thresholds),
        })
        .collect()
}
