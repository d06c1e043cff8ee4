//! Point-forecast accuracy metrics.
//!
//! Percentage metrics (MAPE, SMAPE, MSMAPE) are reported in percent; WAPE
//! is a plain ratio. Division by zero is always an error.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_MSMAPE_EPSILON: f64 = 0.1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("{metric}: division by zero")]
    DivisionByZero { metric: Metric },
    #[error("mase requires the training series")]
    MissingTrainSeries,
    #[error("mase requires a training series longer than the seasonal period {period}, got {len}")]
    TrainTooShort { len: usize, period: usize },
    #[error("forecast length {forecasts} does not match actual length {actuals}")]
    LengthMismatch { forecasts: usize, actuals: usize },
    #[error("empty forecast")]
    Empty,
    #[error("non-finite input")]
    NonFinite,
    #[error("no values to average")]
    EmptyList,
    #[error("unknown metric `{0}`")]
    Unknown(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Mae,
    Mape,
    Mse,
    Smape,
    Rmse,
    Wape,
    Msmape,
    Mase,
}

impl Metric {
    pub const ALL: [Metric; 8] = [
        Metric::Mae,
        Metric::Mape,
        Metric::Mse,
        Metric::Smape,
        Metric::Rmse,
        Metric::Wape,
        Metric::Msmape,
        Metric::Mase,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Metric::Mae => "mae",
            Metric::Mape => "mape",
            Metric::Mse => "mse",
            Metric::Smape => "smape",
            Metric::Rmse => "rmse",
            Metric::Wape => "wape",
            Metric::Msmape => "msmape",
            Metric::Mase => "mase",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Metric {
    type Err = MetricError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.token() == s)
            .ok_or_else(|| MetricError::Unknown(s.to_string()))
    }
}

/// Inputs to a metric evaluation. `train` and `seasonal_period` are only
/// read by MASE.
#[derive(Debug, Clone, Copy)]
pub struct MetricContext<'a> {
    pub forecasts: &'a [f64],
    pub actuals: &'a [f64],
    pub train: Option<&'a [f64]>,
    pub seasonal_period: usize,
    pub msmape_epsilon: f64,
}

impl<'a> MetricContext<'a> {
    pub fn new(forecasts: &'a [f64], actuals: &'a [f64]) -> Self {
        Self { forecasts, actuals, train: None, seasonal_period: 1, msmape_epsilon: DEFAULT_MSMAPE_EPSILON }
    }

    pub fn with_train(mut self, train: &'a [f64], seasonal_period: usize) -> Self {
        self.train = Some(train);
        self.seasonal_period = seasonal_period;
        self
    }

    fn check(&self) -> Result<(), MetricError> {
        if self.forecasts.len() != self.actuals.len() {
            return Err(MetricError::LengthMismatch {
                forecasts: self.forecasts.len(),
                actuals: self.actuals.len(),
            });
        }
        if self.forecasts.is_empty() {
            return Err(MetricError::Empty);
        }
        if self.forecasts.iter().chain(self.actuals).any(|v| !v.is_finite()) {
            return Err(MetricError::NonFinite);
        }
        Ok(())
    }

    fn abs_errors(&self) -> impl Iterator<Item = f64> + '_ {
        self.forecasts.iter().zip(self.actuals).map(|(f, y)| (f - y).abs())
    }
}

pub fn compute_metric(metric: Metric, ctx: &MetricContext<'_>) -> Result<f64, MetricError> {
    ctx.check()?;
    let h = ctx.forecasts.len() as f64;
    let value = match metric {
        Metric::Mae => ctx.abs_errors().sum::<f64>() / h,
        Metric::Mse => ctx.abs_errors().map(|e| e * e).sum::<f64>() / h,
        Metric::Rmse => (ctx.abs_errors().map(|e| e * e).sum::<f64>() / h).sqrt(),
        Metric::Mape => {
            if ctx.actuals.contains(&0.0) {
                return Err(MetricError::DivisionByZero { metric });
            }
            100.0 * ctx.abs_errors().zip(ctx.actuals).map(|(e, y)| e / y.abs()).sum::<f64>() / h
        }
        Metric::Smape => {
            let mut total = 0.0;
            for (f, y) in ctx.forecasts.iter().zip(ctx.actuals) {
                let denom = (y.abs() + f.abs()) / 2.0;
                if denom == 0.0 {
                    return Err(MetricError::DivisionByZero { metric });
                }
                total += (f - y).abs() / denom;
            }
            100.0 * total / h
        }
        Metric::Wape => {
            let denom: f64 = ctx.actuals.iter().map(|y| y.abs()).sum();
            if denom == 0.0 {
                return Err(MetricError::DivisionByZero { metric });
            }
            ctx.abs_errors().sum::<f64>() / denom
        }
        Metric::Msmape => {
            let eps = ctx.msmape_epsilon;
            let total: f64 = ctx
                .forecasts
                .iter()
                .zip(ctx.actuals)
                .map(|(f, y)| (f - y).abs() / ((y.abs() + f.abs() + eps).max(0.5 + eps) / 2.0))
                .sum();
            100.0 * total / h
        }
        Metric::Mase => {
            let train = ctx.train.ok_or(MetricError::MissingTrainSeries)?;
            let s = ctx.seasonal_period.max(1);
            if train.len() <= s {
                return Err(MetricError::TrainTooShort { len: train.len(), period: s });
            }
            if train.iter().any(|v| !v.is_finite()) {
                return Err(MetricError::NonFinite);
            }
            let naive: f64 = train.windows(s + 1).map(|w| (w[s] - w[0]).abs()).sum();
            let scale = h / (train.len() - s) as f64 * naive;
            if scale == 0.0 {
                return Err(MetricError::DivisionByZero { metric });
            }
            ctx.abs_errors().sum::<f64>() / scale
        }
    };
    if !value.is_finite() {
        return Err(MetricError::NonFinite);
    }
    Ok(value)
}

/// Arithmetic mean of per-window values. Non-finite entries are an error.
pub fn average_over_windows(values: &[f64]) -> Result<f64, MetricError> {
    if values.is_empty() {
        return Err(MetricError::EmptyList);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(MetricError::NonFinite);
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// Multichannel evaluation. MASE is computed per channel against that
/// channel's training series and averaged; every other metric is computed
/// over the flattened (horizon x channel) errors.
pub fn compute_metric_multichannel(
    metric: Metric,
    forecasts: &[Vec<f64>],
    actuals: &[Vec<f64>],
    train: Option<&[Vec<f64>]>,
    seasonal_period: usize,
    msmape_epsilon: f64,
) -> Result<f64, MetricError> {
    if forecasts.len() != actuals.len() {
        return Err(MetricError::LengthMismatch { forecasts: forecasts.len(), actuals: actuals.len() });
    }
    if metric == Metric::Mase {
        let train = train.ok_or(MetricError::MissingTrainSeries)?;
        let per_channel = forecasts
            .iter()
            .zip(actuals)
            .zip(train)
            .map(|((f, y), tr)| {
                let ctx = MetricContext { forecasts: f, actuals: y, train: Some(tr), seasonal_period, msmape_epsilon };
                compute_metric(metric, &ctx)
            })
            .collect::<Result<Vec<_>, _>>()?;
        return average_over_windows(&per_channel);
    }
    let f: Vec<f64> = forecasts.iter().flatten().copied().collect();
    let y: Vec<f64> = actuals.iter().flatten().copied().collect();
    let ctx = MetricContext { forecasts: &f, actuals: &y, train: None, seasonal_period, msmape_epsilon };
    compute_metric(metric, &ctx)
}
