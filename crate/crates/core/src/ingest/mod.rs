//! Dataset files and run configuration.
//!
//! # Dataset format
//!
//! A dataset is a wide CSV file. The first column is named `date` and holds
//! either integer indices or ISO-8601 dates/datetimes (`2020-01-31`,
//! `2020-01-31 13:00:00`, `2020-01-31T13:00:00`, or RFC 3339 with an
//! offset). Timestamps must be strictly increasing. Every other column is
//! one channel. Empty cells and `NaN`/`NA`/`null` (any case) are missing
//! values, handled by the manifest's [`MissingPolicy`].
//!
//! An optional sidecar with the same basename and the extension `.meta`
//! (`traffic.csv` -> `traffic.meta`) holds `key = value` lines; `#` starts a
//! comment. Recognised keys: `frequency`, `seasonal_period`, `domain`,
//! `split`. Values set in a config manifest take precedence over the
//! sidecar.
//!
//! Numbers are written back with Rust's shortest round-trip float
//! formatting, so [`write_dataset_csv`] followed by [`load_dataset`]
//! reproduces every value bit for bit.

mod config;
mod table;

use std::path::PathBuf;

use thiserror::Error;

use crate::model::ModelError;

pub use config::{
    parse_config, parse_config_str, Cell, DatasetEntry, MethodEntry, RunConfig,
};
pub use table::{
    load_csv, load_dataset, read_sidecar, sidecar_path, write_dataset_csv, DatasetManifest, MissingPolicy,
    SidecarMeta,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IngestError {
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("line {line}, column `{column}`: {message}")]
    Parse { line: usize, column: String, message: String },
    #[error("line {line}, column `{column}`: missing value")]
    MissingValues { line: usize, column: String },
    #[error("line {line}: expected {expected} fields, found {actual}")]
    RaggedRows { line: usize, expected: usize, actual: usize },
    #[error("config error at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("unknown method `{0}`")]
    UnknownMethod(String),
    #[error("dataset `{dataset}`: {reason}")]
    InvalidSplit { dataset: String, reason: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl IngestError {
    pub(crate) fn io(path: impl Into<PathBuf>, e: impl ToString) -> Self {
        IngestError::Io { path: path.into(), message: e.to_string() }
    }
}
