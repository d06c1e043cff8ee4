//! The method layer: a uniform fit/predict contract over built-in baselines
//! and external programs.
//!
//! Series are passed channel-major: `&[&[f64]]` holds one slice per
//! channel, all of equal length. A [`Forecast`] is likewise channel-major;
//! [`Forecast::rows`] gives the `F x N` view.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

mod ar;
mod ets;
pub mod external;
mod naive;

pub use ar::ArModel;
pub use ets::EtsModel;
pub use external::ExternalCommand;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ForecastError {
    #[error("unknown method `{0}`")]
    UnknownMethod(String),
    #[error("method `{method}` does not accept hyperparameter `{key}`")]
    UnknownHyperparameter { method: String, key: String },
    #[error("hyperparameter `{key}`: {reason}")]
    InvalidHyperparameter { key: String, reason: String },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("least-squares system is singular (collinear inputs)")]
    SingularSystem,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("forecast contains non-finite values")]
    NonFiniteOutput,
    #[error("external method failed: {0}")]
    External(String),
}

/// How multi-step forecasts are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PredictionMode {
    /// One model per step, all steps emitted at once.
    #[default]
    Dms,
    /// A one-step model applied recursively on its own outputs.
    Ims,
}

impl fmt::Display for PredictionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PredictionMode::Dms => "dms",
            PredictionMode::Ims => "ims",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HyperValue {
    Bool(bool),
    Int(i64),
    Float(f64),
    Text(String),
}

impl fmt::Display for HyperValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HyperValue::Bool(b) => write!(f, "{b}"),
            HyperValue::Int(i) => write!(f, "{i}"),
            HyperValue::Float(x) => write!(f, "{x}"),
            HyperValue::Text(s) => write!(f, "{s}"),
        }
    }
}

/// A method name plus its configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodSpec {
    pub name: String,
    #[serde(default)]
    pub hyperparameters: BTreeMap<String, HyperValue>,
    #[serde(default)]
    pub prediction_mode: PredictionMode,
    #[serde(default)]
    pub seed: u64,
}

impl MethodSpec {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), hyperparameters: BTreeMap::new(), prediction_mode: PredictionMode::Dms, seed: 0 }
    }

    pub fn with(mut self, key: &str, value: HyperValue) -> Self {
        self.hyperparameters.insert(key.to_string(), value);
        self
    }

    pub fn mode(mut self, mode: PredictionMode) -> Self {
        self.prediction_mode = mode;
        self
    }

    /// Short stable label, e.g. `var(order=2)/ims`. A text `label`
    /// hyperparameter replaces the generated `name(params)` part.
    pub fn label(&self) -> String {
        let mut s = self.name.clone();
        if let Some(HyperValue::Text(label)) = self.hyperparameters.get("label") {
            s = label.clone();
        } else if !self.hyperparameters.is_empty() {
            let parts: Vec<String> = self.hyperparameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
            s.push_str(&format!("({})", parts.join(",")));
        }
        if self.prediction_mode == PredictionMode::Ims {
            s.push_str("/ims");
        }
        s
    }

    fn usize_param(&self, key: &str) -> Result<Option<usize>, ForecastError> {
        match self.hyperparameters.get(key) {
            None => Ok(None),
            Some(HyperValue::Int(i)) if *i >= 1 => Ok(Some(*i as usize)),
            Some(v) => Err(ForecastError::InvalidHyperparameter {
                key: key.to_string(),
                reason: format!("expected a positive integer, got {v}"),
            }),
        }
    }

    fn text_param(&self, key: &str) -> Result<Option<&str>, ForecastError> {
        match self.hyperparameters.get(key) {
            None => Ok(None),
            Some(HyperValue::Text(s)) => Ok(Some(s)),
            Some(v) => Err(ForecastError::InvalidHyperparameter {
                key: key.to_string(),
                reason: format!("expected a string, got {v}"),
            }),
        }
    }
}

/// Built-in method names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodKind {
    Naive,
    SeasonalNaive,
    LinearRegression,
    Var,
    Ets,
    External,
}

impl MethodKind {
    pub const ALL: [MethodKind; 6] = [
        MethodKind::Naive,
        MethodKind::SeasonalNaive,
        MethodKind::LinearRegression,
        MethodKind::Var,
        MethodKind::Ets,
        MethodKind::External,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MethodKind::Naive => "naive",
            MethodKind::SeasonalNaive => "seasonal_naive",
            MethodKind::LinearRegression => "linear_regression",
            MethodKind::Var => "var",
            MethodKind::Ets => "ets",
            MethodKind::External => "external",
        }
    }

    pub fn allowed_keys(self) -> &'static [&'static str] {
        match self {
            MethodKind::Naive => &[],
            MethodKind::SeasonalNaive => &["period"],
            MethodKind::LinearRegression => &["lags"],
            MethodKind::Var => &["order"],
            MethodKind::Ets => &["period"],
            MethodKind::External => &["command", "label"],
        }
    }

    /// Statistical methods retrain at every rolling window by default.
    pub fn retrains_by_default(self) -> bool {
        !matches!(self, MethodKind::External)
    }
}

impl FromStr for MethodKind {
    type Err = ForecastError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MethodKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| ForecastError::UnknownMethod(s.to_string()))
    }
}

pub fn registered_methods() -> Vec<&'static str> {
    MethodKind::ALL.iter().map(|k| k.name()).collect()
}

/// Checks that the name is registered and every hyperparameter key is
/// known to that method and well typed.
pub fn validate_spec(spec: &MethodSpec) -> Result<MethodKind, ForecastError> {
    let kind: MethodKind = spec.name.parse()?;
    for key in spec.hyperparameters.keys() {
        if !kind.allowed_keys().contains(&key.as_str()) {
            return Err(ForecastError::UnknownHyperparameter { method: spec.name.clone(), key: key.clone() });
        }
    }
    match kind {
        MethodKind::SeasonalNaive | MethodKind::Ets => {
            spec.usize_param("period")?;
        }
        MethodKind::LinearRegression => {
            spec.usize_param("lags")?;
        }
        MethodKind::Var => {
            if let Some(p) = spec.usize_param("order")? {
                if p > ar::MAX_VAR_ORDER {
                    return Err(ForecastError::InvalidHyperparameter {
                        key: "order".into(),
                        reason: format!("must be between 1 and {}", ar::MAX_VAR_ORDER),
                    });
                }
            }
        }
        MethodKind::External => {
            if spec.text_param("command")?.is_none() {
                return Err(ForecastError::InvalidHyperparameter {
                    key: "command".into(),
                    reason: "external methods need a command".into(),
                });
            }
            spec.text_param("label")?;
        }
        MethodKind::Naive => {}
    }
    Ok(kind)
}

/// Evaluation-side facts a method may need at fit time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FitContext {
    /// Largest horizon the model will be asked for (direct models fit one
    /// regression per step up to this).
    pub horizon: usize,
    /// Lookback window length; the default lag count for linear models.
    pub lookback: usize,
    pub seasonal_period: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LearnedParams {
    Naive,
    SeasonalNaive { period: usize },
    Ar(ArModel),
    Ets(EtsModel),
    External(ExternalCommand),
}

/// A fitted method. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedModel {
    pub method: String,
    pub mode: PredictionMode,
    pub channels: usize,
    pub params: LearnedParams,
    /// SHA-256 of the training slice (hex, first 16 chars).
    pub fingerprint: String,
}

/// Channel-major forecast: `values[channel][step]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Forecast {
    pub values: Vec<Vec<f64>>,
}

impl Forecast {
    pub fn horizon(&self) -> usize {
        self.values.first().map_or(0, |c| c.len())
    }

    pub fn channels(&self) -> usize {
        self.values.len()
    }

    /// `F x N` row view.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.horizon()).map(|t| self.values.iter().map(|c| c[t]).collect()).collect()
    }
}

pub fn data_fingerprint(data: &[&[f64]]) -> String {
    let mut h = Sha256::new();
    h.update((data.len() as u64).to_le_bytes());
    for c in data {
        h.update((c.len() as u64).to_le_bytes());
        for v in c.iter() {
            h.update(v.to_bits().to_le_bytes());
        }
    }
    hex::encode(&h.finalize()[..8])
}

fn check_panel(data: &[&[f64]]) -> Result<usize, ForecastError> {
    let first = data.first().ok_or_else(|| ForecastError::ShapeMismatch("no channels".into()))?;
    if data.iter().any(|c| c.len() != first.len()) {
        return Err(ForecastError::ShapeMismatch("channels differ in length".into()));
    }
    Ok(first.len())
}

pub fn fit(spec: &MethodSpec, train: &[&[f64]], ctx: &FitContext) -> Result<FittedModel, ForecastError> {
    let kind = validate_spec(spec)?;
    let len = check_panel(train)?;
    if len == 0 {
        return Err(ForecastError::InsufficientData("empty training slice".into()));
    }
    let params = match kind {
        MethodKind::Naive => LearnedParams::Naive,
        MethodKind::SeasonalNaive => {
            let period = spec.usize_param("period")?.unwrap_or(ctx.seasonal_period).max(1);
            if len < period {
                return Err(ForecastError::InsufficientData(format!(
                    "seasonal_naive needs {period} points, got {len}"
                )));
            }
            LearnedParams::SeasonalNaive { period }
        }
        MethodKind::LinearRegression => {
            let lags = spec.usize_param("lags")?.unwrap_or(ctx.lookback).max(1);
            LearnedParams::Ar(ArModel::fit_per_channel(train, lags, ctx.horizon, spec.prediction_mode)?)
        }
        MethodKind::Var => {
            let order = spec.usize_param("order")?.unwrap_or(1);
            LearnedParams::Ar(ArModel::fit_joint(train, order, ctx.horizon, spec.prediction_mode)?)
        }
        MethodKind::Ets => {
            let period = spec.usize_param("period")?.unwrap_or(ctx.seasonal_period).max(1);
            LearnedParams::Ets(EtsModel::fit(train, period)?)
        }
        MethodKind::External => {
            let command = spec.text_param("command")?.unwrap_or_default();
            LearnedParams::External(ExternalCommand::new(command, spec.seed, ctx.lookback))
        }
    };
    Ok(FittedModel {
        method: spec.name.clone(),
        mode: spec.prediction_mode,
        channels: train.len(),
        params,
        fingerprint: data_fingerprint(train),
    })
}

pub fn predict(model: &FittedModel, history: &[&[f64]], horizon: usize) -> Result<Forecast, ForecastError> {
    if history.len() != model.channels {
        return Err(ForecastError::ShapeMismatch(format!(
            "model fitted on {} channels, history has {}",
            model.channels,
            history.len()
        )));
    }
    let len = check_panel(history)?;
    if horizon == 0 {
        return Err(ForecastError::ShapeMismatch("horizon must be at least 1".into()));
    }
    if len == 0 {
        return Err(ForecastError::InsufficientData("empty history".into()));
    }
    let values = match &model.params {
        LearnedParams::Naive => naive::naive(history, horizon),
        LearnedParams::SeasonalNaive { period } => naive::seasonal_naive(history, *period, horizon)?,
        LearnedParams::Ar(m) => m.predict(history, horizon, model.mode)?,
        LearnedParams::Ets(m) => m.predict(history, horizon, model.mode)?,
        LearnedParams::External(cmd) => cmd.run(history, horizon)?,
    };
    if values.len() != model.channels || values.iter().any(|c| c.len() != horizon) {
        return Err(ForecastError::ShapeMismatch("forecast has the wrong shape".into()));
    }
    if values.iter().flatten().any(|v| !v.is_finite()) {
        return Err(ForecastError::NonFiniteOutput);
    }
    Ok(Forecast { values })
}
