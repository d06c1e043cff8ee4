//! Reproducible evaluation of time-series forecasting methods.
//!
//! The crate is organised in the same layers a benchmark run passes
//! through:
//!
//! * [`model`] and [`ingest`]: validated series, datasets, splits, CSV
//!   loading and run configuration.
//! * [`characterize`]: trend, seasonality, stationarity, shifting,
//!   transition and correlation scores for a series or dataset.
//! * [`forecast`]: the method contract and built-in baselines.
//! * [`eval`] and [`metrics`]: fixed and rolling evaluation over every test
//!   window, normalisation, and the eight accuracy metrics.
//! * [`report`] and [`pipeline`]: result records, rank tables, exports and
//!   the end-to-end runner behind the `tsbench` binary.

pub mod characterize;
pub mod eval;
pub mod forecast;
pub mod ingest;
pub mod linalg;
pub mod metrics;
pub mod model;
pub mod pipeline;
pub mod report;
pub mod stats;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
