//! Run configuration in TOML.
//!
//! ```toml
//! seed = 7                      # default 0; copied into every method
//! strategy = "rolling"          # "fixed" | "rolling" (default)
//! metrics = ["mae", "mse"]      # default: all eight
//! normalization = "zscore"      # "zscore" (default) | "none"
//! raw_scale = false             # score on the original scale
//! stride = 1                    # rolling stride
//! batch_size = 1                # rolling execution batch, never changes results
//! lookback = 30                 # default round(1.25 * horizon)
//! output_dir = "results"        # relative to this file
//! parallelism = 1               # worker threads
//! record_timing = false         # fill the `seconds` result column
//!
//! [[datasets]]
//! path = "data/sine.csv"        # relative to this file
//! horizons = [6, 12]
//! # optional: name, domain, frequency, seasonal_period, split, channels,
//! # missing ("reject" | "ffill" | "interpolate"), lookback
//!
//! [[methods]]
//! name = "var"
//! prediction_mode = "dms"       # "dms" (default) | "ims"
//! # optional: seed, retrain_each_window
//! [methods.hyperparameters]
//! order = 2
//! ```
//!
//! Unknown keys anywhere are rejected with their path. Every
//! (dataset, horizon) pair is checked against the strategy before anything
//! runs.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::table::{load_dataset, DatasetManifest, MissingPolicy};
use super::IngestError;
use crate::eval::{EvaluationPlan, Normalization, Strategy};
use crate::forecast::{self, data_fingerprint, ForecastError, HyperValue, MethodSpec, PredictionMode};
use crate::metrics::Metric;
use crate::model::{Dataset, Frequency, SplitSpec};

fn one() -> usize {
    1
}

fn rolling() -> Strategy {
    Strategy::Rolling
}

fn all_metrics() -> Vec<Metric> {
    Metric::ALL.to_vec()
}

fn results_dir() -> PathBuf {
    PathBuf::from("results")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetEntry {
    pub path: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency: Option<Frequency>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seasonal_period: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channels: Option<Vec<String>>,
    #[serde(default)]
    pub missing: MissingPolicy,
    pub horizons: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lookback: Option<usize>,
}

impl DatasetEntry {
    pub fn manifest(&self, base_dir: &Path) -> DatasetManifest {
        DatasetManifest {
            path: base_dir.join(&self.path),
            name: Some(self.name.clone().unwrap_or_else(|| {
                self.path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
            })),
            domain: self.domain.clone(),
            frequency: self.frequency,
            seasonal_period: self.seasonal_period,
            split: self.split.clone(),
            channels: self.channels.clone(),
            missing: self.missing,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodEntry {
    pub name: String,
    #[serde(default)]
    pub hyperparameters: BTreeMap<String, HyperValue>,
    #[serde(default)]
    pub prediction_mode: PredictionMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub retrain_each_window: Option<bool>,
}

impl MethodEntry {
    pub fn spec(&self, run_seed: u64) -> MethodSpec {
        MethodSpec {
            name: self.name.clone(),
            hyperparameters: self.hyperparameters.clone(),
            prediction_mode: self.prediction_mode,
            seed: self.seed.unwrap_or(run_seed),
        }
    }
}

/// One (dataset, method, horizon) unit of work, by index into the config.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub dataset: usize,
    pub method: usize,
    pub horizon: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "rolling")]
    pub strategy: Strategy,
    #[serde(default = "all_metrics")]
    pub metrics: Vec<Metric>,
    #[serde(default)]
    pub normalization: Normalization,
    #[serde(default)]
    pub raw_scale: bool,
    #[serde(default = "one")]
    pub stride: usize,
    #[serde(default = "one")]
    pub batch_size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lookback: Option<usize>,
    #[serde(default = "results_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "one")]
    pub parallelism: usize,
    #[serde(default)]
    pub record_timing: bool,
    pub datasets: Vec<DatasetEntry>,
    pub methods: Vec<MethodEntry>,
    /// Directory relative paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
    #[serde(skip)]
    loaded: Vec<Dataset>,
}

impl RunConfig {
    /// Loaded datasets, in config order.
    pub fn loaded_datasets(&self) -> &[Dataset] {
        &self.loaded
    }

    pub fn output_path(&self) -> PathBuf {
        self.base_dir.join(&self.output_dir)
    }

    /// Every cell in canonical (dataset, method, horizon) order.
    pub fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        for (d, entry) in self.datasets.iter().enumerate() {
            for m in 0..self.methods.len() {
                for &h in &entry.horizons {
                    cells.push(Cell { dataset: d, method: m, horizon: h });
                }
            }
        }
        cells
    }

    pub fn plan(&self, cell: Cell) -> EvaluationPlan {
        let entry = &self.datasets[cell.dataset];
        let method = &self.methods[cell.method];
        EvaluationPlan {
            method: method.spec(self.seed),
            strategy: self.strategy,
            horizon: cell.horizon,
            lookback: entry.lookback.or(self.lookback),
            stride: self.stride,
            metrics: self.metrics.clone(),
            normalization: self.normalization,
            retrain_each_window: method.retrain_each_window,
            batch_size: self.batch_size,
            raw_scale: self.raw_scale,
            msmape_epsilon: crate::metrics::DEFAULT_MSMAPE_EPSILON,
        }
    }

    /// The config as normalized TOML: defaults filled in, keys in a fixed
    /// order.
    pub fn canonical_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Hash of everything that can change a result value: the canonical
    /// config without `parallelism` and `output_dir`, plus the content of
    /// every loaded dataset. 16 hex characters.
    pub fn fingerprint(&self) -> String {
        let mut c = self.clone();
        c.parallelism = 1;
        c.output_dir = PathBuf::new();
        c.record_timing = false;
        let mut h = Sha256::new();
        h.update(c.canonical_toml().as_bytes());
        for ds in &self.loaded {
            let cols: Vec<&[f64]> = ds.channels().iter().map(|s| s.values()).collect();
            h.update(ds.name().as_bytes());
            h.update(data_fingerprint(&cols).as_bytes());
        }
        hex::encode(&h.finalize()[..8])
    }

    fn validate(&mut self) -> Result<(), IngestError> {
        let schema = |path: &str, message: &str| IngestError::Schema { path: path.into(), message: message.into() };
        if self.datasets.is_empty() {
            return Err(schema("datasets", "at least one dataset is required"));
        }
        if self.methods.is_empty() {
            return Err(schema("methods", "at least one method is required"));
        }
        if self.metrics.is_empty() {
            return Err(schema("metrics", "at least one metric is required"));
        }
        for (key, v) in [("stride", self.stride), ("batch_size", self.batch_size), ("parallelism", self.parallelism)] {
            if v == 0 {
                return Err(schema(key, "must be at least 1"));
            }
        }
        let mut labels = BTreeSet::new();
        for (i, m) in self.methods.iter().enumerate() {
            match forecast::validate_spec(&m.spec(self.seed)) {
                Ok(_) => {}
                Err(ForecastError::UnknownMethod(name)) => return Err(IngestError::UnknownMethod(name)),
                Err(e) => return Err(schema(&format!("methods[{i}].hyperparameters"), &e.to_string())),
            }
            if !labels.insert(m.spec(0).label()) {
                return Err(schema(&format!("methods[{i}]"), "duplicate method configuration"));
            }
        }
        let mut names = BTreeSet::new();
        let mut loaded = Vec::with_capacity(self.datasets.len());
        for (i, entry) in self.datasets.iter().enumerate() {
            if entry.horizons.is_empty() || entry.horizons.contains(&0) {
                return Err(schema(&format!("datasets[{i}].horizons"), "horizons must be a non-empty list of positive integers"));
            }
            let manifest = entry.manifest(&self.base_dir);
            let name = manifest.display_name();
            if let Some(s) = &entry.split {
                SplitSpec::from_str(s)
                    .map_err(|e| IngestError::InvalidSplit { dataset: name.clone(), reason: e.to_string() })?;
            }
            if !names.insert(name.clone()) {
                return Err(schema(&format!("datasets[{i}].name"), &format!("duplicate dataset name `{name}`")));
            }
            let ds = load_dataset(&manifest)?;
            for &h in &entry.horizons {
                for m in 0..self.methods.len() {
                    let plan = self.plan(Cell { dataset: i, method: m, horizon: h });
                    plan.validate(&ds)
                        .map_err(|e| IngestError::InvalidSplit { dataset: name.clone(), reason: format!("horizon {h}: {e}") })?;
                }
            }
            loaded.push(ds);
        }
        self.loaded = loaded;
        Ok(())
    }
}

/// Parses and fully validates a config held in memory. Relative paths
/// resolve against `base_dir`.
pub fn parse_config_str(text: &str, base_dir: &Path) -> Result<RunConfig, IngestError> {
    let de = toml::Deserializer::new(text);
    let mut cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        IngestError::Schema { path: if path == "." { "<root>".into() } else { path }, message: e.into_inner().message().trim().to_string() }
    })?;
    cfg.base_dir = base_dir.to_path_buf();
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config(path: impl AsRef<Path>) -> Result<RunConfig, IngestError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| IngestError::io(path, e))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_config_str(&text, &base)
}
