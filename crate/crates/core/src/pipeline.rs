//! End-to-end runner: config in, result files out.
//!
//! Cells run on a dedicated thread pool of `parallelism` workers. Results
//! are collected by cell index and written in canonical order, so the
//! result file does not depend on the worker count or completion order.
//!
//! Files written to the output directory:
//!
//! * `results.csv`: see [`crate::report`];
//! * `config.toml`: the canonical form of the config that was run;
//! * `run.log`: appended to, one `key=value` line per event.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::eval;
use crate::ingest::{Cell, IngestError, RunConfig};
use crate::report::{self, ReportError, ResultRecord};
use crate::VERSION;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Config(#[from] IngestError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
}

/// Process exit codes used by the command-line tool.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const VALIDATION: i32 = 1;
    pub const PARTIAL_FAILURE: i32 = 2;
    pub const IO: i32 = 3;
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(IngestError::Io { .. }) | PipelineError::Io { .. } => exit::IO,
            PipelineError::Report(ReportError::Io { .. }) => exit::IO,
            _ => exit::VALIDATION,
        }
    }
}

fn io_err(path: &Path, e: impl ToString) -> PipelineError {
    PipelineError::Io { path: path.to_path_buf(), message: e.to_string() }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub records: Vec<ResultRecord>,
    pub fingerprint: String,
    pub output_dir: PathBuf,
    pub results_path: PathBuf,
    /// Cells with at least one unscored window or failed metric.
    pub failed_cells: usize,
}

impl RunSummary {
    pub fn exit_code(&self) -> i32 {
        if self.failed_cells > 0 {
            exit::PARTIAL_FAILURE
        } else {
            exit::SUCCESS
        }
    }
}

/// Evaluates one cell into one record per metric. Never fails: problems
/// end up in the records.
pub fn run_cell(cfg: &RunConfig, cell: Cell, fingerprint: &str) -> Vec<ResultRecord> {
    let ds = &cfg.loaded_datasets()[cell.dataset];
    let plan = cfg.plan(cell);
    let started = Instant::now();
    let outcome = eval::run(ds, &plan);
    let seconds = cfg.record_timing.then(|| started.elapsed().as_secs_f64());
    let base = |metric, value, windows, failures, reason| ResultRecord {
        dataset: ds.name().to_string(),
        method: plan.method.label(),
        horizon: plan.horizon,
        strategy: plan.strategy,
        metric,
        value,
        windows,
        failures,
        seconds,
        fingerprint: fingerprint.to_string(),
        version: VERSION.to_string(),
        reason,
    };
    match outcome {
        Ok(report) => report
            .rows
            .into_iter()
            .map(|row| base(row.metric, row.value, row.windows, row.failures, row.reason))
            .collect(),
        Err(e) => plan.metrics.iter().map(|&m| base(m, None, 0, 0, Some(e.to_string()))).collect(),
    }
}

/// Runs every cell and returns the records in canonical order without
/// touching the filesystem.
pub fn evaluate_all(cfg: &RunConfig) -> Result<Vec<ResultRecord>, PipelineError> {
    let fingerprint = cfg.fingerprint();
    let cells = cfg.cells();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallelism)
        .build()
        .map_err(|e| io_err(Path::new("<thread pool>"), e))?;
    let per_cell: Vec<Vec<ResultRecord>> =
        pool.install(|| cells.par_iter().map(|&c| run_cell(cfg, c, &fingerprint)).collect());
    let mut records: Vec<ResultRecord> = per_cell.into_iter().flatten().collect();
    report::canonical_sort(&mut records);
    Ok(records)
}

fn log_line(log: &mut fs::File, path: &Path, fields: &[(&str, String)]) -> Result<(), PipelineError> {
    let mut line = format!("ts={}", chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true));
    for (k, v) in fields {
        let v = if v.contains([' ', '"', '=']) { format!("{v:?}") } else { v.clone() };
        line.push_str(&format!(" {k}={v}"));
    }
    writeln!(log, "{line}").map_err(|e| io_err(path, e))
}

/// Runs the config and writes the output directory.
pub fn run(cfg: &RunConfig) -> Result<RunSummary, PipelineError> {
    let out = cfg.output_path();
    fs::create_dir_all(&out).map_err(|e| io_err(&out, e))?;
    let log_path = out.join("run.log");
    let mut log = OpenOptions::new().create(true).append(true).open(&log_path).map_err(|e| io_err(&log_path, e))?;
    let fingerprint = cfg.fingerprint();
    log_line(
        &mut log,
        &log_path,
        &[
            ("event", "run_start".into()),
            ("fingerprint", fingerprint.clone()),
            ("version", VERSION.into()),
            ("cells", cfg.cells().len().to_string()),
            ("parallelism", cfg.parallelism.to_string()),
            ("seed", cfg.seed.to_string()),
        ],
    )?;
    for (entry, ds) in cfg.datasets.iter().zip(cfg.loaded_datasets()) {
        log_line(
            &mut log,
            &log_path,
            &[
                ("event", "dataset".into()),
                ("dataset", ds.name().into()),
                ("length", ds.len().to_string()),
                ("channels", ds.n_channels().to_string()),
                ("seasonal_period", ds.seasonal_period().to_string()),
                ("split", ds.split().to_string()),
                ("missing", entry.missing.as_str().into()),
            ],
        )?;
    }

    let records = evaluate_all(cfg)?;
    let mut failed_cells = 0;
    for chunk in records.chunk_by(|a, b| (&a.dataset, &a.method, a.horizon) == (&b.dataset, &b.method, b.horizon)) {
        let failed = chunk.iter().any(|r| r.value.is_none() || r.failures > 0);
        failed_cells += usize::from(failed);
        let first = &chunk[0];
        let mut fields = vec![
            ("event", "cell".to_string()),
            ("dataset", first.dataset.clone()),
            ("method", first.method.clone()),
            ("horizon", first.horizon.to_string()),
            ("windows", first.windows.to_string()),
            ("status", if failed { "failed" } else { "ok" }.to_string()),
        ];
        if let Some(reason) = chunk.iter().find_map(|r| r.reason.clone()) {
            fields.push(("reason", reason));
        }
        log_line(&mut log, &log_path, &fields)?;
    }

    let results_path = out.join("results.csv");
    report::export_results(&records, report::ExportFormat::Csv, &results_path)?;
    let cfg_path = out.join("config.toml");
    fs::write(&cfg_path, cfg.canonical_toml()).map_err(|e| io_err(&cfg_path, e))?;
    log_line(
        &mut log,
        &log_path,
        &[
            ("event", "run_end".into()),
            ("records", records.len().to_string()),
            ("failed_cells", failed_cells.to_string()),
        ],
    )?;
    Ok(RunSummary { records, fingerprint, output_dir: out, results_path, failed_cells })
}
