//! Subprocess adapter for methods implemented outside this crate.
//!
//! For every prediction the harness writes, into a fresh scratch directory:
//!
//! * `history.csv`: header `c0,c1,...`, then one row per time step
//!   (oldest first), one column per channel;
//! * `request.meta`: `key=value` lines `horizon`, `lookback`, `seed`,
//!   `channels`.
//!
//! and runs `<command> history.csv request.meta forecast.csv` with the
//! scratch directory as working directory. The program must write
//! `forecast.csv` with exactly `horizon` rows of `channels` comma-separated
//! numbers; an optional header row is skipped. A nonzero exit status is a
//! method failure.

use std::fs;
use std::path::Path;
use std::process::Command;

use super::ForecastError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalCommand {
    program: String,
    args: Vec<String>,
    seed: u64,
    lookback: usize,
}

impl ExternalCommand {
    /// `command` is split on whitespace into program and leading arguments.
    pub fn new(command: &str, seed: u64, lookback: usize) -> Self {
        let mut parts = command.split_whitespace().map(str::to_string);
        let program = parts.next().unwrap_or_default();
        Self { program, args: parts.collect(), seed, lookback }
    }

    pub fn run(&self, history: &[&[f64]], horizon: usize) -> Result<Vec<Vec<f64>>, ForecastError> {
        let dir = tempfile::tempdir().map_err(|e| ForecastError::External(e.to_string()))?;
        write_request(dir.path(), history, horizon, self.lookback, self.seed)
            .map_err(|e| ForecastError::External(format!("writing request: {e}")))?;
        let output = Command::new(&self.program)
            .args(&self.args)
            .args(["history.csv", "request.meta", "forecast.csv"])
            .current_dir(dir.path())
            .output()
            .map_err(|e| ForecastError::External(format!("cannot start `{}`: {e}", self.program)))?;
        if !output.status.success() {
            let stderr = String::from_utf8_lossy(&output.stderr);
            return Err(ForecastError::External(format!(
                "`{}` exited with {}: {}",
                self.program,
                output.status,
                stderr.trim()
            )));
        }
        let text = fs::read_to_string(dir.path().join("forecast.csv"))
            .map_err(|e| ForecastError::External(format!("reading forecast.csv: {e}")))?;
        parse_response(&text, history.len(), horizon)
    }
}

pub fn write_request(
    dir: &Path,
    history: &[&[f64]],
    horizon: usize,
    lookback: usize,
    seed: u64,
) -> std::io::Result<()> {
    let mut csv = String::new();
    let header: Vec<String> = (0..history.len()).map(|i| format!("c{i}")).collect();
    csv.push_str(&header.join(","));
    csv.push('\n');
    for t in 0..history[0].len() {
        let row: Vec<String> = history.iter().map(|c| c[t].to_string()).collect();
        csv.push_str(&row.join(","));
        csv.push('\n');
    }
    fs::write(dir.join("history.csv"), csv)?;
    fs::write(
        dir.join("request.meta"),
        format!("horizon={horizon}\nlookback={lookback}\nseed={seed}\nchannels={}\n", history.len()),
    )
}

/// Parses an `F x N` response into channel-major values.
pub fn parse_response(text: &str, channels: usize, horizon: usize) -> Result<Vec<Vec<f64>>, ForecastError> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parsed: Result<Vec<f64>, _> = line.split(',').map(|c| c.trim().parse::<f64>()).collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(_) if i == 0 => continue,
            Err(_) => return Err(ForecastError::External(format!("forecast.csv line {}: not numeric", i + 1))),
        }
    }
    if rows.len() != horizon || rows.iter().any(|r| r.len() != channels) {
        return Err(ForecastError::ShapeMismatch(format!(
            "expected {horizon} rows of {channels} values in forecast.csv"
        )));
    }
    Ok((0..channels).map(|c| rows.iter().map(|r| r[c]).collect()).collect())
}
