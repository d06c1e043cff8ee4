//! Result records, rank tables and plot-ready tables.
//!
//! # Result file
//!
//! `results.csv` has the header
//!
//! ```text
//! dataset,method,horizon,strategy,metric,value,windows,failures,seconds,fingerprint,version,reason
//! ```
//!
//! Rows are sorted by (dataset, method, horizon, metric, strategy). Floats
//! use shortest round-trip formatting. `value` is `failed` when no window
//! could be scored, and `reason` then carries the first error. `seconds` is
//! `na` unless timing was requested, because wall-clock time would make
//! otherwise identical runs differ.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::characterize::{classify_characteristics, CharacteristicProfile, Thresholds};
use crate::eval::Strategy;
use crate::metrics::Metric;

pub const RESULT_HEADER: [&str; 12] = [
    "dataset",
    "method",
    "horizon",
    "strategy",
    "metric",
    "value",
    "windows",
    "failures",
    "seconds",
    "fingerprint",
    "version",
    "reason",
];

/// Relative tolerance under which two values count as tied.
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReportError {
    #[error("no result records")]
    EmptyRecords,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

fn io_err(path: &Path, e: impl ToString) -> ReportError {
    ReportError::Io { path: path.to_path_buf(), message: e.to_string() }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub dataset: String,
    pub method: String,
    pub horizon: usize,
    pub strategy: Strategy,
    pub metric: Metric,
    /// `None` marks a failed cell.
    pub value: Option<f64>,
    pub windows: usize,
    pub failures: usize,
    pub seconds: Option<f64>,
    pub fingerprint: String,
    pub version: String,
    pub reason: Option<String>,
}

impl ResultRecord {
    fn sort_key(&self) -> (&str, &str, usize, &str, &str) {
        (&self.dataset, &self.method, self.horizon, self.metric.token(), self.strategy.as_str())
    }
}

/// Sorts records into the canonical export order.
pub fn canonical_sort(records: &mut [ResultRecord]) {
    records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    /// A TOML document with one `[[record]]` table per row.
    StructuredText,
}

impl FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ExportFormat::Csv),
            "structured-text" | "toml" => Ok(ExportFormat::StructuredText),
            other => Err(format!("unknown export format `{other}` (expected csv or structured-text)")),
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Renders records as CSV in canonical order.
pub fn results_csv(records: &[ResultRecord]) -> String {
    let mut sorted = records.to_vec();
    canonical_sort(&mut sorted);
    let mut out = RESULT_HEADER.join(",");
    out.push('\n');
    for r in &sorted {
        let fields = [
            csv_field(&r.dataset),
            csv_field(&r.method),
            r.horizon.to_string(),
            r.strategy.to_string(),
            r.metric.to_string(),
            r.value.map_or_else(|| "failed".to_string(), |v| v.to_string()),
            r.windows.to_string(),
            r.failures.to_string(),
            r.seconds.map_or_else(|| "na".to_string(), |v| format!("{v:.3}")),
            csv_field(&r.fingerprint),
            csv_field(&r.version),
            csv_field(r.reason.as_deref().unwrap_or("")),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct TomlRecord<'a> {
    dataset: &'a str,
    method: &'a str,
    horizon: usize,
    strategy: &'a str,
    metric: &'a str,
    value: String,
    windows: usize,
    failures: usize,
    seconds: String,
    fingerprint: &'a str,
    version: &'a str,
    reason: &'a str,
}

#[derive(Serialize)]
struct TomlDoc<'a> {
    record: Vec<TomlRecord<'a>>,
}

/// Renders records as a TOML document in canonical order. Values are kept
/// as strings so `failed` and round-trip float text survive unchanged.
pub fn results_structured(records: &[ResultRecord]) -> String {
    let mut sorted = records.to_vec();
    canonical_sort(&mut sorted);
    let doc = TomlDoc {
        record: sorted
            .iter()
            .map(|r| TomlRecord {
                dataset: &r.dataset,
                method: &r.method,
                horizon: r.horizon,
                strategy: r.strategy.as_str(),
                metric: r.metric.token(),
                value: r.value.map_or_else(|| "failed".to_string(), |v| v.to_string()),
                windows: r.windows,
                failures: r.failures,
                seconds: r.seconds.map_or_else(|| "na".to_string(), |v| format!("{v:.3}")),
                fingerprint: &r.fingerprint,
                version: &r.version,
                reason: r.reason.as_deref().unwrap_or(""),
            })
            .collect(),
    };
    toml::to_string(&doc).expect("records serialize")
}

pub fn export_results(records: &[ResultRecord], format: ExportFormat, path: impl AsRef<Path>) -> Result<(), ReportError> {
    if records.is_empty() {
        return Err(ReportError::EmptyRecords);
    }
    let path = path.as_ref();
    let text = match format {
        ExportFormat::Csv => results_csv(records),
        ExportFormat::StructuredText => results_structured(records),
    };
    fs::write(path, text).map_err(|e| io_err(path, e))
}

/// Reads a `results.csv` written by [`export_results`].
pub fn read_results_csv(path: impl AsRef<Path>) -> Result<Vec<ResultRecord>, ReportError> {
    let path = path.as_ref();
    let mut reader = csv::Reader::from_path(path).map_err(|e| io_err(path, e))?;
    let header: Vec<String> = reader.headers().map_err(|e| io_err(path, e))?.iter().map(str::to_string).collect();
    if header != RESULT_HEADER {
        return Err(ReportError::Parse { line: 1, message: format!("unexpected header {}", header.join(",")) });
    }
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| io_err(path, e))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let bad = |what: &str| ReportError::Parse { line, message: format!("bad {what}") };
        let value = match &rec[5] {
            "failed" => None,
            v => Some(v.parse::<f64>().map_err(|_| bad("value"))?),
        };
        let seconds = match &rec[8] {
            "na" => None,
            v => Some(v.parse::<f64>().map_err(|_| bad("seconds"))?),
        };
        out.push(ResultRecord {
            dataset: rec[0].to_string(),
            method: rec[1].to_string(),
            horizon: rec[2].parse().map_err(|_| bad("horizon"))?,
            strategy: rec[3].parse().map_err(|_| bad("strategy"))?,
            metric: rec[4].parse().map_err(|_| bad("metric"))?,
            value,
            windows: rec[6].parse().map_err(|_| bad("windows"))?,
            failures: rec[7].parse().map_err(|_| bad("failures"))?,
            seconds,
            fingerprint: rec[9].to_string(),
            version: rec[10].to_string(),
            reason: Some(rec[11].to_string()).filter(|s| !s.is_empty()),
        });
    }
    Ok(out)
}

/// What counts as one competition when ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RankGranularity {
    /// Every (dataset, horizon) pair is a separate cell.
    #[default]
    PerHorizon,
    /// Values are averaged over horizons first; a method missing any horizon
    /// of a dataset does not compete on that dataset.
    PerDataset,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankTable {
    pub metric: Metric,
    pub lower_is_better: bool,
    /// Cells that had at least one scored value.
    pub cells: usize,
    /// Best-value counts, including methods that never won.
    pub counts: BTreeMap<String, usize>,
}

impl RankTable {
    /// Methods by descending count, then name.
    pub fn ordered(&self) -> Vec<(&str, usize)> {
        let mut v: Vec<(&str, usize)> = self.counts.iter().map(|(m, &c)| (m.as_str(), c)).collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        v
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("method,count\n");
        for (m, c) in self.ordered() {
            let _ = writeln!(out, "{},{c}", csv_field(m));
        }
        out
    }
}

impl fmt::Display for RankTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.counts.keys().map(String::len).max().unwrap_or(6).max(6);
        writeln!(f, "{:width$}  best counts on {} ({} cells)", "method", self.metric, self.cells)?;
        for (m, c) in self.ordered() {
            writeln!(f, "{m:width$}  {c}")?;
        }
        Ok(())
    }
}

fn tied(a: f64, best: f64) -> bool {
    (a - best).abs() <= TIE_TOLERANCE * a.abs().max(best.abs())
}

/// Counts, per method, the cells on which it achieves the best `metric`
/// value. Ties within [`TIE_TOLERANCE`] credit every tied method. Failed
/// values never win.
pub fn aggregate_ranks(
    records: &[ResultRecord],
    metric: Metric,
    lower_is_better: bool,
    granularity: RankGranularity,
) -> Result<RankTable, ReportError> {
    let relevant: Vec<&ResultRecord> = records.iter().filter(|r| r.metric == metric).collect();
    if relevant.is_empty() {
        return Err(ReportError::EmptyRecords);
    }
    let mut counts: BTreeMap<String, usize> = relevant.iter().map(|r| (r.method.clone(), 0)).collect();

    // cell -> method -> value
    let mut cells: BTreeMap<(String, Option<usize>), BTreeMap<String, f64>> = BTreeMap::new();
    match granularity {
        RankGranularity::PerHorizon => {
            for r in &relevant {
                if let Some(v) = r.value {
                    cells.entry((r.dataset.clone(), Some(r.horizon))).or_default().insert(r.method.clone(), v);
                }
            }
        }
        RankGranularity::PerDataset => {
            let mut horizons: BTreeMap<&str, BTreeSet<usize>> = BTreeMap::new();
            let mut sums: BTreeMap<(&str, &str), BTreeMap<usize, f64>> = BTreeMap::new();
            for r in &relevant {
                horizons.entry(&r.dataset).or_default().insert(r.horizon);
                if let Some(v) = r.value {
                    sums.entry((&r.dataset, &r.method)).or_default().insert(r.horizon, v);
                }
            }
            for ((d, m), by_h) in sums {
                if by_h.len() == horizons[d].len() {
                    let mean = by_h.values().sum::<f64>() / by_h.len() as f64;
                    cells.entry((d.to_string(), None)).or_default().insert(m.to_string(), mean);
                }
            }
        }
    }

    for values in cells.values() {
        let best = values
            .values()
            .copied()
            .fold(None, |acc: Option<f64>, v| match acc {
                None => Some(v),
                Some(b) if (lower_is_better && v < b) || (!lower_is_better && v > b) => Some(v),
                keep => keep,
            })
            .expect("cells are never empty");
        for (m, &v) in values {
            if tied(v, best) {
                *counts.get_mut(m).unwrap() += 1;
            }
        }
    }
    Ok(RankTable { metric, lower_is_better, cells: cells.len(), counts })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    CharacteristicRadar,
    RankBar,
    MetricVsHorizon,
}

impl FromStr for PlotKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "characteristic-radar" | "radar" => Ok(PlotKind::CharacteristicRadar),
            "rank-bar" => Ok(PlotKind::RankBar),
            "metric-vs-horizon" => Ok(PlotKind::MetricVsHorizon),
            other => Err(format!(
                "unknown plot kind `{other}` (expected characteristic-radar, rank-bar or metric-vs-horizon)"
            )),
        }
    }
}

/// Radar axes in output order.
pub const RADAR_AXES: [&str; 6] = ["trend", "seasonality", "stationarity", "shifting", "transition", "correlation"];

fn radar_values(p: &CharacteristicProfile) -> [Option<f64>; 6] {
    [
        Some(p.trend_strength),
        Some(p.seasonality_strength),
        Some(if p.stationary { 1.0 } else { 0.0 }),
        Some(p.shifting),
        Some(p.transition),
        p.correlation,
    ]
}

/// `series,axis,value` with six rows per profile. Stationarity is 1 or 0;
/// correlation is `na` for univariate series.
pub fn radar_table(profiles: &[(String, CharacteristicProfile)]) -> Result<String, ReportError> {
    if profiles.is_empty() {
        return Err(ReportError::InsufficientData("no profiles for a radar chart".into()));
    }
    let mut out = String::from("series,axis,value\n");
    for (name, p) in profiles {
        for (axis, v) in RADAR_AXES.iter().zip(radar_values(p)) {
            let v = v.map_or_else(|| "na".to_string(), |x| x.to_string());
            let _ = writeln!(out, "{},{axis},{v}", csv_field(name));
        }
    }
    Ok(out)
}

pub fn rank_bar_table(table: &RankTable) -> Result<String, ReportError> {
    if table.counts.is_empty() {
        return Err(ReportError::InsufficientData("rank table is empty".into()));
    }
    Ok(table.to_csv())
}

/// `dataset,method,horizon,value` for one metric, one row per horizon.
/// Failed cells are written as `failed`.
pub fn metric_vs_horizon_table(records: &[ResultRecord], metric: Metric) -> Result<String, ReportError> {
    let mut rows: Vec<&ResultRecord> = records.iter().filter(|r| r.metric == metric).collect();
    if rows.is_empty() {
        return Err(ReportError::InsufficientData(format!("no `{metric}` records")));
    }
    rows.sort_by(|a, b| (&a.dataset, &a.method, a.horizon).cmp(&(&b.dataset, &b.method, b.horizon)));
    let mut out = String::from("dataset,method,horizon,value\n");
    for r in rows {
        let v = r.value.map_or_else(|| "failed".to_string(), |x| x.to_string());
        let _ = writeln!(out, "{},{},{},{v}", csv_field(&r.dataset), csv_field(&r.method), r.horizon);
    }
    Ok(out)
}

/// Inputs for [`emit_plot_data`].
#[derive(Debug, Clone, Copy)]
pub enum PlotSource<'a> {
    Profiles(&'a [(String, CharacteristicProfile)]),
    Ranks(&'a RankTable),
    Records { records: &'a [ResultRecord], metric: Metric },
}

pub fn emit_plot_data(kind: PlotKind, source: PlotSource<'_>, path: impl AsRef<Path>) -> Result<(), ReportError> {
    let text = match (kind, source) {
        (PlotKind::CharacteristicRadar, PlotSource::Profiles(p)) => radar_table(p)?,
        (PlotKind::RankBar, PlotSource::Ranks(t)) => rank_bar_table(t)?,
        (PlotKind::MetricVsHorizon, PlotSource::Records { records, metric }) => metric_vs_horizon_table(records, metric)?,
        (kind, _) => return Err(ReportError::InsufficientData(format!("wrong input for {kind:?}"))),
    };
    let path = path.as_ref();
    fs::write(path, text).map_err(|e| io_err(path, e))
}

/// Characteristic scores and flags per named series, as CSV.
pub fn profile_table(rows: &[(String, CharacteristicProfile)], thresholds: &Thresholds) -> String {
    let mut out = String::from(
        "series,trend_strength,seasonality_strength,stationary,adf_pvalue,shifting,transition,correlation,\
         is_trend,is_seasonal,is_shifting,is_transition\n",
    );
    for (name, p) in rows {
        let corr = p.correlation.map_or_else(|| "na".to_string(), |c| c.to_string());
        let f = classify_characteristics(p, thresholds);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{corr},{},{},{},{}",
            csv_field(name),
            p.trend_strength,
            p.seasonality_strength,
            p.stationary,
            p.adf_pvalue,
            p.shifting,
            p.transition,
            f.trend,
            f.seasonality,
            f.shifting,
            f.transition
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(dataset: &str, method: &str, horizon: usize, value: Option<f64>) -> ResultRecord {
        ResultRecord {
            dataset: dataset.into(),
            method: method.into(),
            horizon,
            strategy: Strategy::Rolling,
            metric: Metric::Mae,
            value,
            windows: 3,
            failures: if value.is_some() { 0 } else { 3 },
            seconds: None,
            fingerprint: "abc".into(),
            version: "0.1.0".into(),
            reason: value.is_none().then(|| "boom, twice".to_string()),
        }
    }

    fn table(records: &[ResultRecord]) -> BTreeMap<String, usize> {
        aggregate_ranks(records, Metric::Mae, true, RankGranularity::PerHorizon).unwrap().counts
    }

    #[test]
    fn counts_best_per_cell() {
        let r = vec![
            rec("d1", "A", 1, Some(1.0)),
            rec("d1", "B", 1, Some(2.0)),
            rec("d2", "A", 1, Some(1.0)),
            rec("d2", "B", 1, Some(3.0)),
            rec("d3", "A", 1, Some(5.0)),
            rec("d3", "B", 1, Some(3.0)),
        ];
        let t = table(&r);
        assert_eq!(t["A"], 2);
        assert_eq!(t["B"], 1);
    }

    #[test]
    fn ties_credit_everyone() {
        let r = vec![rec("d", "A", 1, Some(0.5)), rec("d", "B", 1, Some(0.5)), rec("d", "C", 1, Some(0.6))];
        let t = table(&r);
        assert_eq!((t["A"], t["B"], t["C"]), (1, 1, 0));
    }

    #[test]
    fn single_method_wins_everything() {
        let r = vec![rec("d1", "A", 1, Some(9.0)), rec("d2", "A", 1, Some(1.0))];
        assert_eq!(table(&r)["A"], 2);
        assert_eq!(aggregate_ranks(&[], Metric::Mae, true, RankGranularity::PerHorizon), Err(ReportError::EmptyRecords));
    }

    #[test]
    fn failed_values_never_win() {
        let r = vec![rec("d", "A", 1, None), rec("d", "B", 1, Some(9.0))];
        let t = table(&r);
        assert_eq!((t["A"], t["B"]), (0, 1));
    }

    #[test]
    fn per_dataset_averages_horizons() {
        let r = vec![
            rec("d", "A", 1, Some(1.0)),
            rec("d", "A", 2, Some(5.0)),
            rec("d", "B", 1, Some(2.0)),
            rec("d", "B", 2, Some(2.0)),
        ];
        let per_h = table(&r);
        assert_eq!((per_h["A"], per_h["B"]), (1, 1));
        let per_d = aggregate_ranks(&r, Metric::Mae, true, RankGranularity::PerDataset).unwrap();
        assert_eq!((per_d.counts["A"], per_d.counts["B"]), (0, 1));
        assert_eq!(per_d.cells, 1);
    }

    #[test]
    fn csv_export_canonical_and_failed() {
        let a = vec![rec("z", "B", 2, Some(0.25)), rec("a", "A", 1, None)];
        let b: Vec<ResultRecord> = a.iter().rev().cloned().collect();
        let text = results_csv(&a);
        assert_eq!(text, results_csv(&b));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1], "a,A,1,rolling,mae,failed,3,3,na,abc,0.1.0,\"boom, twice\"");
        assert_eq!(lines[2], "z,B,2,rolling,mae,0.25,3,0,na,abc,0.1.0,");
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("results.csv");
        let mut a = vec![rec("z", "B", 2, Some(0.1 + 0.2)), rec("a", "A", 1, None)];
        export_results(&a, ExportFormat::Csv, &p).unwrap();
        canonical_sort(&mut a);
        assert_eq!(read_results_csv(&p).unwrap(), a);
        assert_eq!(export_results(&[], ExportFormat::Csv, &p), Err(ReportError::EmptyRecords));
    }

    #[test]
    fn structured_export_parses() {
        let text = results_structured(&[rec("d", "A", 1, Some(1.5))]);
        let v: toml::Value = toml::from_str(&text).unwrap();
        assert_eq!(v["record"][0]["value"].as_str(), Some("1.5"));
    }

    #[test]
    fn plot_tables() {
        let p = CharacteristicProfile {
            trend_strength: 0.9,
            seasonality_strength: 0.1,
            stationary: false,
            adf_pvalue: 0.4,
            shifting: 0.3,
            transition: 0.05,
            correlation: Some(1.2),
        };
        let radar = radar_table(&[("s".into(), p)]).unwrap();
        assert_eq!(radar.lines().count(), 7);
        assert!(radar.contains("s,stationarity,0\n"));

        let r: Vec<ResultRecord> = (1..=4).map(|h| rec("d", "A", h * 6, Some(h as f64))).collect();
        let t = metric_vs_horizon_table(&r, Metric::Mae).unwrap();
        assert_eq!(t.lines().count(), 5);
        assert!(matches!(metric_vs_horizon_table(&[], Metric::Mae), Err(ReportError::InsufficientData(_))));
        assert!(matches!(radar_table(&[]), Err(ReportError::InsufficientData(_))));
    }
}
