//! Domain types shared by every layer: validated series, multichannel
//! datasets, chronological splits and forecast windows.
//!
//! All algorithms operate on index order. Timestamps are carried along for
//! reporting only.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("series is empty")]
    EmptySeries,
    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },
    #[error("timestamps are not strictly increasing at index {index}")]
    NonMonotoneTimestamps { index: usize },
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("seasonal period must be at least 1")]
    InvalidPeriod,
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("series of length {len} is too short to split into three non-empty ranges")]
    TooShort { len: usize },
    #[error("dataset has no channels")]
    NoChannels,
    #[error("invalid forecast window: {0}")]
    InvalidWindow(String),
}

/// Sampling frequency tag. Only used to choose a default seasonal period
/// and per-frequency horizons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frequency {
    Yearly,
    Quarterly,
    Monthly,
    Weekly,
    Daily,
    Hourly,
    Other,
}

impl Frequency {
    /// Conventional points per cycle. Weekly data uses 52, capped below the
    /// series length by [`Frequency::seasonal_period_for`].
    pub fn default_seasonal_period(self) -> usize {
        match self {
            Frequency::Yearly => 1,
            Frequency::Quarterly => 4,
            Frequency::Monthly => 12,
            Frequency::Weekly => 52,
            Frequency::Daily => 7,
            Frequency::Hourly => 24,
            Frequency::Other => 1,
        }
    }

    pub fn seasonal_period_for(self, len: usize) -> usize {
        let p = self.default_seasonal_period();
        if p >= len {
            len.saturating_sub(1).max(1)
        } else {
            p
        }
    }

    /// Forecast horizons used for univariate series of this frequency.
    pub fn univariate_horizon(self) -> usize {
        match self {
            Frequency::Yearly => 6,
            Frequency::Quarterly => 8,
            Frequency::Monthly => 18,
            Frequency::Weekly => 13,
            Frequency::Daily => 14,
            Frequency::Hourly => 48,
            Frequency::Other => 8,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Frequency::Yearly => "yearly",
            Frequency::Quarterly => "quarterly",
            Frequency::Monthly => "monthly",
            Frequency::Weekly => "weekly",
            Frequency::Daily => "daily",
            Frequency::Hourly => "hourly",
            Frequency::Other => "other",
        }
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Frequency {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "yearly" => Frequency::Yearly,
            "quarterly" => Frequency::Quarterly,
            "monthly" => Frequency::Monthly,
            "weekly" => Frequency::Weekly,
            "daily" => Frequency::Daily,
            "hourly" => Frequency::Hourly,
            "other" => Frequency::Other,
            other => return Err(format!("unknown frequency `{other}`")),
        })
    }
}

/// Timestamp of one observation. Either an integer index or seconds since
/// the Unix epoch parsed from an ISO-8601 string.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub enum Instant {
    Index(i64),
    Epoch(i64),
}

/// Series metadata supplied alongside raw values.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesMeta {
    pub frequency: Frequency,
    /// `None` means use the frequency default.
    pub seasonal_period: Option<usize>,
}

impl Default for SeriesMeta {
    fn default() -> Self {
        Self { frequency: Frequency::Other, seasonal_period: None }
    }
}

/// One validated channel of observations.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    timestamps: Option<Vec<Instant>>,
    seasonal_period: usize,
    frequency: Frequency,
}

impl TimeSeries {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn timestamps(&self) -> Option<&[Instant]> {
        self.timestamps.as_deref()
    }

    pub fn seasonal_period(&self) -> usize {
        self.seasonal_period
    }

    pub fn frequency(&self) -> Frequency {
        self.frequency
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn meta(&self) -> SeriesMeta {
        SeriesMeta { frequency: self.frequency, seasonal_period: Some(self.seasonal_period) }
    }
}

/// Checks every [`TimeSeries`] invariant and builds the series.
pub fn validate_series(
    values: Vec<f64>,
    timestamps: Option<Vec<Instant>>,
    meta: &SeriesMeta,
) -> Result<TimeSeries, ModelError> {
    if values.is_empty() {
        return Err(ModelError::EmptySeries);
    }
    if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(ModelError::NonFinite { index, value });
    }
    if let Some(ts) = &timestamps {
        if ts.len() != values.len() {
            return Err(ModelError::LengthMismatch { expected: values.len(), actual: ts.len() });
        }
        check_increasing(ts)?;
    }
    let seasonal_period = match meta.seasonal_period {
        Some(0) => return Err(ModelError::InvalidPeriod),
        Some(p) => p,
        None => meta.frequency.seasonal_period_for(values.len()),
    };
    Ok(TimeSeries { values, timestamps, seasonal_period, frequency: meta.frequency })
}

fn check_increasing(ts: &[Instant]) -> Result<(), ModelError> {
    for (i, w) in ts.windows(2).enumerate() {
        let ordered = match (w[0], w[1]) {
            (Instant::Index(a), Instant::Index(b)) | (Instant::Epoch(a), Instant::Epoch(b)) => a < b,
            _ => false,
        };
        if !ordered {
            return Err(ModelError::NonMonotoneTimestamps { index: i + 1 });
        }
    }
    Ok(())
}

/// Train/validation/test proportions. Stored as integer parts (for example
/// 7:1:2) so the fractions are exact rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    train: u32,
    val: u32,
    test: u32,
}

impl SplitSpec {
    pub fn new(train: u32, val: u32, test: u32) -> Result<Self, ModelError> {
        if train == 0 || val == 0 || test == 0 {
            return Err(ModelError::InvalidSplit(format!(
                "every part must be positive, got {train}:{val}:{test}"
            )));
        }
        Ok(Self { train, val, test })
    }

    pub fn parts(&self) -> (u32, u32, u32) {
        (self.train, self.val, self.test)
    }

    pub fn train_fraction(&self) -> f64 {
        f64::from(self.train) / f64::from(self.total())
    }

    pub fn val_fraction(&self) -> f64 {
        f64::from(self.val) / f64::from(self.total())
    }

    pub fn test_fraction(&self) -> f64 {
        f64::from(self.test) / f64::from(self.total())
    }

    fn total(&self) -> u32 {
        self.train + self.val + self.test
    }
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self { train: 7, val: 1, test: 2 }
    }
}

impl fmt::Display for SplitSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.train, self.val, self.test)
    }
}

impl FromStr for SplitSpec {
    type Err = ModelError;

    /// Accepts `7:1:2` or fractional `0.7:0.1:0.2` forms.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModelError::InvalidSplit(format!("cannot parse `{s}`"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        if parts.iter().all(|p| p.trim().parse::<u32>().is_ok()) {
            let v: Vec<u32> = parts.iter().map(|p| p.trim().parse().unwrap()).collect();
            return SplitSpec::new(v[0], v[1], v[2]);
        }
        let v: Vec<f64> = parts
            .iter()
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        if (v.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(ModelError::InvalidSplit(format!("fractions in `{s}` do not sum to 1")));
        }
        // hundredths are enough for every published ratio
        let ints: Vec<u32> = v.iter().map(|x| (x * 100.0).round() as u32).collect();
        SplitSpec::new(ints[0], ints[1], ints[2])
    }
}

/// Contiguous train/validation/test index ranges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitRanges {
    pub train: Range<usize>,
    pub val: Range<usize>,
    pub test: Range<usize>,
}

/// Splits `[0, len)` chronologically. Boundaries are cumulative floors of
/// `fraction * len`; the remainder goes to the test range.
pub fn split_chronological(len: usize, spec: &SplitSpec) -> Result<SplitRanges, ModelError> {
    let total = u64::from(spec.total());
    let n = len as u64;
    let train_end = (n * u64::from(spec.train) / total) as usize;
    let val_end = (n * u64::from(spec.train + spec.val) / total) as usize;
    if train_end == 0 || val_end == train_end || val_end >= len {
        return Err(ModelError::TooShort { len });
    }
    Ok(SplitRanges { train: 0..train_end, val: train_end..val_end, test: val_end..len })
}

/// N equally long channels plus the metadata needed to evaluate them.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    channel_names: Vec<String>,
    channels: Vec<TimeSeries>,
    domain: String,
    split: SplitSpec,
}

impl Dataset {
    pub fn new(
        name: impl Into<String>,
        channel_names: Vec<String>,
        channels: Vec<TimeSeries>,
        domain: impl Into<String>,
        split: SplitSpec,
    ) -> Result<Self, ModelError> {
        let first = channels.first().ok_or(ModelError::NoChannels)?;
        if channel_names.len() != channels.len() {
            return Err(ModelError::LengthMismatch {
                expected: channels.len(),
                actual: channel_names.len(),
            });
        }
        for c in &channels[1..] {
            if c.len() != first.len() {
                return Err(ModelError::LengthMismatch { expected: first.len(), actual: c.len() });
            }
            if c.timestamps() != first.timestamps() {
                return Err(ModelError::InvalidSplit(
                    "channels do not share timestamps".to_string(),
                ));
            }
        }
        Ok(Self { name: name.into(), channel_names, channels, domain: domain.into(), split })
    }

    /// Convenience constructor for in-memory experiments: untimed channels
    /// with a shared seasonal period.
    pub fn from_columns(
        name: impl Into<String>,
        columns: Vec<Vec<f64>>,
        seasonal_period: usize,
        split: SplitSpec,
    ) -> Result<Self, ModelError> {
        let meta = SeriesMeta { frequency: Frequency::Other, seasonal_period: Some(seasonal_period) };
        let names = (0..columns.len()).map(|i| format!("c{i}")).collect();
        let channels = columns
            .into_iter()
            .map(|c| validate_series(c, None, &meta))
            .collect::<Result<Vec<_>, _>>()?;
        Dataset::new(name, names, channels, "synthetic", split)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &str {
        &self.domain
    }

    pub fn split(&self) -> SplitSpec {
        self.split
    }

    pub fn channels(&self) -> &[TimeSeries] {
        &self.channels
    }

    pub fn channel_names(&self) -> &[String] {
        &self.channel_names
    }

    pub fn n_channels(&self) -> usize {
        self.channels.len()
    }

    pub fn len(&self) -> usize {
        self.channels[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn seasonal_period(&self) -> usize {
        self.channels[0].seasonal_period()
    }

    pub fn frequency(&self) -> Frequency {
        self.channels[0].frequency()
    }

    pub fn split_ranges(&self) -> Result<SplitRanges, ModelError> {
        split_chronological(self.len(), &self.split)
    }
}

/// A single forecasting problem: predict `horizon` points starting at
/// `history_end` from (at least) the `lookback` points before it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ForecastWindow {
    history_end: usize,
    horizon: usize,
    lookback: usize,
}

impl ForecastWindow {
    pub fn new(history_end: usize, horizon: usize, lookback: usize, len: usize) -> Result<Self, ModelError> {
        if horizon == 0 || lookback == 0 {
            return Err(ModelError::InvalidWindow("horizon and lookback must be positive".into()));
        }
        if history_end < lookback {
            return Err(ModelError::InvalidWindow(format!(
                "history end {history_end} leaves fewer than {lookback} lookback points"
            )));
        }
        if history_end + horizon > len {
            return Err(ModelError::InvalidWindow(format!(
                "window {history_end}+{horizon} runs past series end {len}"
            )));
        }
        Ok(Self { history_end, horizon, lookback })
    }

    pub fn history_end(&self) -> usize {
        self.history_end
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn lookback(&self) -> usize {
        self.lookback
    }

    pub fn target(&self) -> Range<usize> {
        self.history_end..self.history_end + self.horizon
    }

    pub fn lookback_range(&self) -> Range<usize> {
        self.history_end - self.lookback..self.history_end
    }
}
