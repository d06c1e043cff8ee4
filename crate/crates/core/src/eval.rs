//! Fixed and rolling evaluation of one method on one dataset.
//!
//! Rolling evaluation scores every window returned by
//! [`enumerate_rolling_windows`]. Windows are executed in batches of
//! `batch_size` (in parallel inside a batch), but per-window metric values
//! are always averaged in window order, so the averaged result does not
//! depend on the batch size.
//!
//! Data flow for one cell:
//!
//! 1. A [`Normalizer`] is fit on the training range (fixed: the first
//!    `T - F` points; rolling: the split's train range) and applied to the
//!    whole panel.
//! 2. Models are fit and predict on the normalized panel.
//! 3. Metrics are computed on the normalized scale unless `raw_scale` is
//!    set. MASE always uses raw forecasts, raw actuals and the raw history.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forecast::{self, FitContext, FittedModel, ForecastError, MethodSpec};
use crate::metrics::{self, Metric, DEFAULT_MSMAPE_EPSILON};
use crate::model::{Dataset, ModelError};
use crate::stats;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("horizon {horizon} exceeds the {available} points available")]
    HorizonTooLong { horizon: usize, available: usize },
    #[error("empty training range")]
    EmptyTrainRange,
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Forecast(#[from] ForecastError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Fixed,
    Rolling,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Fixed => "fixed",
            Strategy::Rolling => "rolling",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fixed" => Ok(Strategy::Fixed),
            "rolling" => Ok(Strategy::Rolling),
            other => Err(EvalError::InvalidPlan(format!("unknown strategy `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    #[default]
    Zscore,
    None,
}

/// Lookback used when a plan does not set one: `round(1.25 * F)`.
pub fn default_lookback(horizon: usize) -> usize {
    (1.25 * horizon as f64).round() as usize
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationPlan {
    pub method: MethodSpec,
    pub strategy: Strategy,
    pub horizon: usize,
    /// `None` means [`default_lookback`].
    pub lookback: Option<usize>,
    pub stride: usize,
    pub metrics: Vec<Metric>,
    pub normalization: Normalization,
    /// `None` means the method's default.
    pub retrain_each_window: Option<bool>,
    /// Execution batch size for rolling windows. Never changes results.
    pub batch_size: usize,
    /// Score on the original scale instead of the normalized one.
    pub raw_scale: bool,
    pub msmape_epsilon: f64,
}

impl EvaluationPlan {
    pub fn new(method: MethodSpec, strategy: Strategy, horizon: usize) -> Self {
        Self {
            method,
            strategy,
            horizon,
            lookback: None,
            stride: 1,
            metrics: Metric::ALL.to_vec(),
            normalization: Normalization::Zscore,
            retrain_each_window: None,
            batch_size: 1,
            raw_scale: false,
            msmape_epsilon: DEFAULT_MSMAPE_EPSILON,
        }
    }

    pub fn with_metrics(mut self, metrics: &[Metric]) -> Self {
        self.metrics = metrics.to_vec();
        self
    }

    pub fn with_lookback(mut self, lookback: usize) -> Self {
        self.lookback = Some(lookback);
        self
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.stride = stride;
        self
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn with_retrain(mut self, retrain: bool) -> Self {
        self.retrain_each_window = Some(retrain);
        self
    }

    pub fn with_batch_size(mut self, batch_size: usize) -> Self {
        self.batch_size = batch_size;
        self
    }

    pub fn lookback_len(&self) -> usize {
        self.lookback.unwrap_or_else(|| default_lookback(self.horizon)).max(1)
    }

    pub fn retrains(&self) -> Result<bool, EvalError> {
        let kind = forecast::validate_spec(&self.method)?;
        Ok(self.retrain_each_window.unwrap_or_else(|| kind.retrains_by_default()))
    }

    /// Checks the plan against a dataset without running anything.
    pub fn validate(&self, ds: &Dataset) -> Result<(), EvalError> {
        forecast::validate_spec(&self.method)?;
        if self.horizon == 0 {
            return Err(EvalError::InvalidPlan("horizon must be at least 1".into()));
        }
        if self.stride == 0 {
            return Err(EvalError::InvalidPlan("stride must be at least 1".into()));
        }
        if self.batch_size == 0 {
            return Err(EvalError::InvalidPlan("batch_size must be at least 1".into()));
        }
        if self.metrics.is_empty() {
            return Err(EvalError::InvalidPlan("no metrics requested".into()));
        }
        let len = ds.len();
        match self.strategy {
            Strategy::Fixed => {
                let needed = self.lookback_len() + self.horizon;
                if needed > len {
                    return Err(EvalError::HorizonTooLong { horizon: self.horizon, available: len.saturating_sub(self.lookback_len()) });
                }
            }
            Strategy::Rolling => {
                let ranges = ds.split_ranges()?;
                if ranges.train.is_empty() {
                    return Err(EvalError::EmptyTrainRange);
                }
                if ranges.test.len() < self.horizon {
                    return Err(EvalError::HorizonTooLong { horizon: self.horizon, available: ranges.test.len() });
                }
            }
        }
        Ok(())
    }
}

/// Offsets (relative to the test start) at which rolling windows end their
/// history: `0, s, 2s, ...` while a full horizon fits, plus `L - F` if the
/// stride skipped it.
pub fn enumerate_rolling_windows(test_len: usize, horizon: usize, stride: usize) -> Result<Vec<usize>, EvalError> {
    if horizon == 0 || stride == 0 {
        return Err(EvalError::InvalidPlan("horizon and stride must be at least 1".into()));
    }
    if test_len < horizon {
        return Err(EvalError::HorizonTooLong { horizon, available: test_len });
    }
    let last = test_len - horizon;
    let mut offsets: Vec<usize> = (0..=last).step_by(stride).collect();
    if offsets.last() != Some(&last) {
        offsets.push(last);
    }
    Ok(offsets)
}

/// Per-channel z-score statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalizer {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

impl Normalizer {
    /// Fits on `range` of every channel. Constant channels get std 1.
    pub fn fit(channels: &[&[f64]], range: Range<usize>) -> Result<Self, EvalError> {
        if range.is_empty() {
            return Err(EvalError::EmptyTrainRange);
        }
        let mut means = Vec::with_capacity(channels.len());
        let mut stds = Vec::with_capacity(channels.len());
        for c in channels {
            let slice = c.get(range.clone()).ok_or(EvalError::EmptyTrainRange)?;
            means.push(stats::mean(slice));
            let sd = stats::std_dev(slice);
            stds.push(if sd > 0.0 && sd.is_finite() { sd } else { 1.0 });
        }
        Ok(Self { means, stds })
    }

    pub fn identity(channels: usize) -> Self {
        Self { means: vec![0.0; channels], stds: vec![1.0; channels] }
    }

    pub fn apply_value(&self, channel: usize, v: f64) -> f64 {
        (v - self.means[channel]) / self.stds[channel]
    }

    pub fn invert_value(&self, channel: usize, v: f64) -> f64 {
        v * self.stds[channel] + self.means[channel]
    }

    pub fn apply(&self, data: &[Vec<f64>]) -> Vec<Vec<f64>> {
        data.iter()
            .enumerate()
            .map(|(c, xs)| xs.iter().map(|&v| self.apply_value(c, v)).collect())
            .collect()
    }

    pub fn invert(&self, data: &[Vec<f64>]) -> Vec<Vec<f64>> {
        data.iter()
            .enumerate()
            .map(|(c, xs)| xs.iter().map(|&v| self.invert_value(c, v)).collect())
            .collect()
    }
}

/// Result for one metric of one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricRow {
    pub metric: Metric,
    /// Mean over scored windows; `None` if no window could be scored.
    pub value: Option<f64>,
    /// Windows enumerated for the cell (1 for fixed).
    pub windows: usize,
    /// Windows that could not be scored for this metric.
    pub failures: usize,
    /// First failure message, if any.
    pub reason: Option<String>,
    /// Per-window values in window order; `None` marks a failure.
    pub per_window: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub strategy: Strategy,
    pub horizon: usize,
    pub lookback: usize,
    pub retrained: bool,
    /// History end offsets relative to the test start (rolling) or `[T - F]`
    /// as an absolute index (fixed).
    pub offsets: Vec<usize>,
    pub rows: Vec<MetricRow>,
}

impl EvalReport {
    pub fn row(&self, metric: Metric) -> Option<&MetricRow> {
        self.rows.iter().find(|r| r.metric == metric)
    }

    pub fn value(&self, metric: Metric) -> Option<f64> {
        self.row(metric).and_then(|r| r.value)
    }
}

pub fn run(ds: &Dataset, plan: &EvaluationPlan) -> Result<EvalReport, EvalError> {
    match plan.strategy {
        Strategy::Fixed => run_fixed(ds, plan),
        Strategy::Rolling => run_rolling(ds, plan),
    }
}

struct Panel {
    raw: Vec<Vec<f64>>,
    norm: Vec<Vec<f64>>,
    normalizer: Normalizer,
    period: usize,
}

impl Panel {
    fn new(ds: &Dataset, plan: &EvaluationPlan, train: Range<usize>) -> Result<Self, EvalError> {
        let raw: Vec<Vec<f64>> = ds.channels().iter().map(|c| c.values().to_vec()).collect();
        let normalizer = match plan.normalization {
            Normalization::Zscore => {
                let views: Vec<&[f64]> = raw.iter().map(|c| c.as_slice()).collect();
                Normalizer::fit(&views, train)?
            }
            Normalization::None => Normalizer::identity(raw.len()),
        };
        let norm = normalizer.apply(&raw);
        Ok(Self { raw, norm, normalizer, period: ds.seasonal_period() })
    }

    fn norm_slice(&self, r: Range<usize>) -> Vec<&[f64]> {
        self.norm.iter().map(|c| &c[r.clone()]).collect()
    }

    fn fit(&self, plan: &EvaluationPlan, end: usize) -> Result<FittedModel, ForecastError> {
        let ctx = FitContext { horizon: plan.horizon, lookback: plan.lookback_len(), seasonal_period: self.period };
        forecast::fit(&plan.method, &self.norm_slice(0..end), &ctx)
    }

    /// Scores one window; the outer error is a forecasting failure that
    /// voids every metric.
    fn score(
        &self,
        plan: &EvaluationPlan,
        model: &FittedModel,
        history: Range<usize>,
    ) -> Result<Vec<Result<f64, String>>, String> {
        let end = history.end;
        let target = end..end + plan.horizon;
        let fc = forecast::predict(model, &self.norm_slice(history), plan.horizon).map_err(|e| e.to_string())?;
        let raw_fc = self.normalizer.invert(&fc.values);
        let raw_actual: Vec<Vec<f64>> = self.raw.iter().map(|c| c[target.clone()].to_vec()).collect();
        let norm_actual: Vec<Vec<f64>> = self.norm.iter().map(|c| c[target.clone()].to_vec()).collect();
        let raw_train: Vec<Vec<f64>> = self.raw.iter().map(|c| c[..end].to_vec()).collect();
        Ok(plan
            .metrics
            .iter()
            .map(|&m| {
                let (f, y) = if m == Metric::Mase || plan.raw_scale {
                    (&raw_fc, &raw_actual)
                } else {
                    (&fc.values, &norm_actual)
                };
                metrics::compute_metric_multichannel(m, f, y, Some(&raw_train), self.period, plan.msmape_epsilon)
                    .map_err(|e| e.to_string())
            })
            .collect())
    }
}

type WindowScores = Result<Vec<Result<f64, String>>, String>;

fn assemble(plan: &EvaluationPlan, outcomes: &[WindowScores], offsets: &[usize]) -> Vec<MetricRow> {
    plan.metrics
        .iter()
        .enumerate()
        .map(|(mi, &metric)| {
            let mut per_window = Vec::with_capacity(outcomes.len());
            let mut reason = None;
            for (w, o) in outcomes.iter().enumerate() {
                let v = match o {
                    Ok(scores) => scores[mi].clone(),
                    Err(e) => Err(e.clone()),
                };
                match v {
                    Ok(x) => per_window.push(Some(x)),
                    Err(e) => {
                        if reason.is_none() {
                            reason = Some(format!("window {} (offset {}): {e}", w, offsets[w]));
                        }
                        per_window.push(None);
                    }
                }
            }
            let scored: Vec<f64> = per_window.iter().flatten().copied().collect();
            let failures = per_window.len() - scored.len();
            let value = metrics::average_over_windows(&scored).ok();
            MetricRow { metric, value, windows: outcomes.len(), failures, reason, per_window }
        })
        .collect()
}

/// Fits on the first `T - F` points and scores the last `F`.
pub fn run_fixed(ds: &Dataset, plan: &EvaluationPlan) -> Result<EvalReport, EvalError> {
    if plan.strategy != Strategy::Fixed {
        return Err(EvalError::InvalidPlan("run_fixed called with a rolling plan".into()));
    }
    plan.validate(ds)?;
    let end = ds.len() - plan.horizon;
    let panel = Panel::new(ds, plan, 0..end)?;
    let outcome = panel
        .fit(plan, end)
        .map_err(|e| e.to_string())
        .and_then(|model| panel.score(plan, &model, 0..end));
    Ok(EvalReport {
        strategy: Strategy::Fixed,
        horizon: plan.horizon,
        lookback: plan.lookback_len(),
        retrained: true,
        offsets: vec![end],
        rows: assemble(plan, &[outcome], &[end]),
    })
}

/// Scores every rolling window over the test range.
///
/// Retraining plans fit on all points before each window's history end and
/// predict from that full history. Otherwise one model is fit on
/// train + validation and each window predicts from the trailing `H`
/// points before its history end.
pub fn run_rolling(ds: &Dataset, plan: &EvaluationPlan) -> Result<EvalReport, EvalError> {
    if plan.strategy != Strategy::Rolling {
        return Err(EvalError::InvalidPlan("run_rolling called with a fixed plan".into()));
    }
    plan.validate(ds)?;
    let ranges = ds.split_ranges()?;
    let test_start = ranges.test.start;
    let offsets = enumerate_rolling_windows(ranges.test.len(), plan.horizon, plan.stride)?;
    let panel = Panel::new(ds, plan, ranges.train.clone())?;
    let retrain = plan.retrains()?;
    let lookback = plan.lookback_len();
    let shared = if retrain { None } else { Some(panel.fit(plan, test_start).map_err(|e| e.to_string())) };

    let window = |offset: usize| -> WindowScores {
        let end = test_start + offset;
        match &shared {
            Some(model) => {
                let model = model.as_ref().map_err(|e| e.clone())?;
                panel.score(plan, model, end.saturating_sub(lookback)..end)
            }
            None => {
                let model = panel.fit(plan, end).map_err(|e| e.to_string())?;
                panel.score(plan, &model, 0..end)
            }
        }
    };

    let mut outcomes: Vec<WindowScores> = Vec::with_capacity(offsets.len());
    for batch in offsets.chunks(plan.batch_size) {
        let mut done: Vec<WindowScores> = batch.par_iter().map(|&o| window(o)).collect();
        outcomes.append(&mut done);
    }

    Ok(EvalReport {
        strategy: Strategy::Rolling,
        horizon: plan.horizon,
        lookback,
        retrained: retrain,
        rows: assemble(plan, &outcomes, &offsets),
        offsets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SplitSpec;

    fn split() -> SplitSpec {
        SplitSpec::new(7, 1, 2).unwrap()
    }

    #[test]
    fn window_counts() {
        assert_eq!(enumerate_rolling_windows(2880, 336, 1).unwrap().len(), 2545);
        assert_eq!(enumerate_rolling_windows(10, 5, 1).unwrap().len(), 6);
        assert_eq!(enumerate_rolling_windows(10, 5, 5).unwrap(), vec![0, 5]);
        assert_eq!(enumerate_rolling_windows(10, 5, 3).unwrap(), vec![0, 3, 5]);
        assert!(matches!(enumerate_rolling_windows(4, 5, 1), Err(EvalError::HorizonTooLong { .. })));
    }

    #[test]
    fn normalizer_basics() {
        let x = [1.0, 2.0, 3.0];
        let n = Normalizer::fit(&[&x], 0..3).unwrap();
        assert_eq!(n.means[0], 2.0);
        assert!((n.stds[0] - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(n.apply_value(0, 2.0), 0.0);
        let c = [5.0; 4];
        let n = Normalizer::fit(&[&c], 0..4).unwrap();
        assert_eq!(n.stds[0], 1.0);
        assert_eq!(n.apply_value(0, 7.0), 2.0);
        assert!(matches!(Normalizer::fit(&[&c], 0..0), Err(EvalError::EmptyTrainRange)));
    }

    #[test]
    fn normalizer_reads_only_train_range() {
        let a = [1.0, 2.0, 3.0, 1000.0];
        let b = [1.0, 2.0, 3.0, -7.0];
        assert_eq!(Normalizer::fit(&[&a], 0..3).unwrap(), Normalizer::fit(&[&b], 0..3).unwrap());
    }

    #[test]
    fn fixed_naive_hand_trace() {
        let ds = Dataset::from_columns("ramp", vec![(1..=10).map(f64::from).collect()], 1, split()).unwrap();
        let plan = EvaluationPlan::new(MethodSpec::new("naive"), Strategy::Fixed, 2)
            .with_normalization(Normalization::None)
            .with_metrics(&[Metric::Mae]);
        let r = run_fixed(&ds, &plan).unwrap();
        assert_eq!(r.value(Metric::Mae), Some(1.5));
        assert_eq!(r.row(Metric::Mae).unwrap().windows, 1);
    }

    #[test]
    fn zero_horizon_rejected() {
        let ds = Dataset::from_columns("ramp", vec![(1..=10).map(f64::from).collect()], 1, split()).unwrap();
        let plan = EvaluationPlan::new(MethodSpec::new("naive"), Strategy::Fixed, 0);
        assert!(matches!(run_fixed(&ds, &plan), Err(EvalError::InvalidPlan(_))));
    }

    #[test]
    fn periodic_series_scores_zero() {
        let x: Vec<f64> = (0..240).map(|i| [3.0, 1.0, 4.0, 1.0, 5.0, 9.0][i % 6]).collect();
        let ds = Dataset::from_columns("p", vec![x], 6, split()).unwrap();
        for horizon in [6, 12] {
            let plan = EvaluationPlan::new(MethodSpec::new("seasonal_naive"), Strategy::Rolling, horizon)
                .with_metrics(&[Metric::Mae, Metric::Mse]);
            let r = run_rolling(&ds, &plan).unwrap();
            let row = r.row(Metric::Mae).unwrap();
            assert_eq!(row.windows, 48 - horizon + 1);
            assert_eq!(row.failures, 0);
            assert!(row.per_window.iter().all(|v| *v == Some(0.0)));
            assert_eq!(r.value(Metric::Mse), Some(0.0));
        }
    }

    #[test]
    fn failures_are_counted() {
        // MAPE divides by zero on the zero-valued target windows only
        let x: Vec<f64> = (0..100).map(|i| if i == 95 { 0.0 } else { 1.0 + (i % 3) as f64 }).collect();
        let ds = Dataset::from_columns("z", vec![x], 1, split()).unwrap();
        let plan = EvaluationPlan::new(MethodSpec::new("naive"), Strategy::Rolling, 2)
            .with_normalization(Normalization::None)
            .with_metrics(&[Metric::Mape, Metric::Mae]);
        let r = run_rolling(&ds, &plan).unwrap();
        let mape = r.row(Metric::Mape).unwrap();
        assert_eq!(mape.windows, 19);
        assert_eq!(mape.failures, 2);
        assert!(mape.reason.as_deref().unwrap().contains("division by zero"));
        assert!(mape.value.is_some());
        assert_eq!(r.row(Metric::Mae).unwrap().failures, 0);
    }

    #[test]
    fn batch_size_does_not_change_results() {
        let x: Vec<f64> = (0..300).map(|i| (i as f64 * 0.3).sin() + 0.01 * i as f64).collect();
        let ds = Dataset::from_columns("s", vec![x], 21, split()).unwrap();
        let base = EvaluationPlan::new(MethodSpec::new("linear_regression"), Strategy::Rolling, 7).with_lookback(14);
        let reference = run_rolling(&ds, &base).unwrap();
        for b in [2, 7, 64] {
            let r = run_rolling(&ds, &base.clone().with_batch_size(b)).unwrap();
            for (u, v) in r.rows.iter().zip(&reference.rows) {
                assert_eq!(u.value.map(f64::to_bits), v.value.map(f64::to_bits));
            }
        }
    }

    #[test]
    fn non_retraining_uses_trailing_lookback() {
        let x: Vec<f64> = (0..100).map(|i| (i * i % 17) as f64).collect();
        let ds = Dataset::from_columns("q", vec![x], 1, split()).unwrap();
        let plan = EvaluationPlan::new(MethodSpec::new("naive"), Strategy::Rolling, 3)
            .with_lookback(4)
            .with_retrain(false);
        let r = run_rolling(&ds, &plan).unwrap();
        assert!(!r.retrained);
        assert_eq!(r.offsets.len(), 18);
        assert_eq!(r.row(Metric::Mae).unwrap().failures, 0);
    }
}
