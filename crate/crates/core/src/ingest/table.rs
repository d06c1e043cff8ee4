use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::{DateTime, NaiveDate, NaiveDateTime, Timelike};
use serde::{Deserialize, Serialize};

use super::IngestError;
use crate::model::{validate_series, Dataset, Frequency, Instant, SeriesMeta, SplitSpec};

/// What to do with missing cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MissingPolicy {
    /// Fail on the first missing cell.
    #[default]
    Reject,
    /// Carry the last observation forward; leading gaps take the first
    /// observation.
    Ffill,
    /// Linear interpolation between neighbours; gaps at either end take the
    /// nearest observation.
    Interpolate,
}

impl MissingPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            MissingPolicy::Reject => "reject",
            MissingPolicy::Ffill => "ffill",
            MissingPolicy::Interpolate => "interpolate",
        }
    }
}

/// Where a dataset lives and how to read it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetManifest {
    pub path: PathBuf,
    /// Defaults to the file stem.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency: Option<Frequency>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seasonal_period: Option<usize>,
    /// `train:val:test`, integer parts or fractions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<String>,
    /// Channel subset by column name, in the order given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channels: Option<Vec<String>>,
    #[serde(default)]
    pub missing: MissingPolicy,
}

impl DatasetManifest {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Self {
            path: path.into(),
            name: None,
            domain: None,
            frequency: None,
            seasonal_period: None,
            split: None,
            channels: None,
            missing: MissingPolicy::Reject,
        }
    }

    pub fn display_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| {
            self.path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
        })
    }
}

/// Contents of a `.meta` sidecar file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SidecarMeta {
    pub frequency: Option<Frequency>,
    pub seasonal_period: Option<usize>,
    pub domain: Option<String>,
    pub split: Option<String>,
}

pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("meta")
}

/// Reads the sidecar next to `csv`; a missing file yields the default.
pub fn read_sidecar(csv: &Path) -> Result<SidecarMeta, IngestError> {
    let path = sidecar_path(csv);
    if !path.exists() {
        return Ok(SidecarMeta::default());
    }
    let text = fs::read_to_string(&path).map_err(|e| IngestError::io(&path, e))?;
    let mut meta = SidecarMeta::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = format!("{}:{}", path.display(), i + 1);
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| IngestError::Schema { path: at.clone(), message: "expected `key = value`".into() })?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |m: String| IngestError::Schema { path: format!("{at}:{key}"), message: m };
        match key {
            "frequency" => meta.frequency = Some(Frequency::from_str(value).map_err(|e| bad(e.to_string()))?),
            "seasonal_period" => {
                meta.seasonal_period = Some(value.parse().map_err(|_| bad(format!("not a positive integer: `{value}`")))?)
            }
            "domain" => meta.domain = Some(value.to_string()),
            "split" => meta.split = Some(value.to_string()),
            _ => return Err(bad("unknown key".into())),
        }
    }
    Ok(meta)
}

fn is_missing(cell: &str) -> bool {
    cell.is_empty() || ["nan", "na", "null"].contains(&cell.to_ascii_lowercase().as_str())
}

fn parse_instant(cell: &str) -> Option<Instant> {
    if let Ok(i) = cell.parse::<i64>() {
        return Some(Instant::Index(i));
    }
    if let Ok(d) = NaiveDate::parse_from_str(cell, "%Y-%m-%d") {
        return Some(Instant::Epoch(d.and_hms_opt(0, 0, 0)?.and_utc().timestamp()));
    }
    for fmt in ["%Y-%m-%d %H:%M:%S", "%Y-%m-%dT%H:%M:%S", "%Y-%m-%d %H:%M", "%Y-%m-%dT%H:%M"] {
        if let Ok(dt) = NaiveDateTime::parse_from_str(cell, fmt) {
            return Some(Instant::Epoch(dt.and_utc().timestamp()));
        }
    }
    DateTime::parse_from_rfc3339(cell).ok().map(|dt| Instant::Epoch(dt.timestamp()))
}

fn fill(column: &mut [Option<f64>], policy: MissingPolicy, name: &str, lines: &[usize]) -> Result<Vec<f64>, IngestError> {
    let first_missing = column.iter().position(Option::is_none);
    let Some(first_gap) = first_missing else {
        return Ok(column.iter().map(|v| v.unwrap()).collect());
    };
    let missing = || IngestError::MissingValues { line: lines[first_gap], column: name.to_string() };
    let observed: Vec<usize> = (0..column.len()).filter(|&i| column[i].is_some()).collect();
    if policy == MissingPolicy::Reject || observed.is_empty() {
        return Err(missing());
    }
    let first = observed[0];
    let last = *observed.last().unwrap();
    let mut out = vec![0.0; column.len()];
    for i in 0..column.len() {
        out[i] = match column[i] {
            Some(v) => v,
            None if i < first => column[first].unwrap(),
            None if i > last || policy == MissingPolicy::Ffill => out[i - 1],
            None => {
                let prev = observed[observed.partition_point(|&j| j < i) - 1];
                let next = observed[observed.partition_point(|&j| j < i)];
                let (a, b) = (column[prev].unwrap(), column[next].unwrap());
                a + (b - a) * (i - prev) as f64 / (next - prev) as f64
            }
        };
    }
    Ok(out)
}

/// Loads a dataset with every manifest override applied.
pub fn load_dataset(manifest: &DatasetManifest) -> Result<Dataset, IngestError> {
    let path = &manifest.path;
    let side = read_sidecar(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| IngestError::io(path, e))?;
    let header: Vec<String> = reader.headers().map_err(|e| IngestError::io(path, e))?.iter().map(str::to_string).collect();
    if header.first().map(|h| h.as_str()) != Some("date") {
        return Err(IngestError::Parse { line: 1, column: header.first().cloned().unwrap_or_default(), message: "first column must be `date`".into() });
    }
    if header.len() < 2 {
        return Err(IngestError::Parse { line: 1, column: "date".into(), message: "no value columns".into() });
    }
    let names: Vec<String> = header[1..].to_vec();
    let selected: Vec<usize> = match &manifest.channels {
        None => (0..names.len()).collect(),
        Some(wanted) => wanted
            .iter()
            .map(|w| {
                names.iter().position(|n| n == w).ok_or_else(|| IngestError::Parse {
                    line: 1,
                    column: w.clone(),
                    message: "no such column".into(),
                })
            })
            .collect::<Result<_, _>>()?,
    };

    let mut stamps: Vec<Instant> = Vec::new();
    let mut lines: Vec<usize> = Vec::new();
    let mut cols: Vec<Vec<Option<f64>>> = vec![Vec::new(); selected.len()];
    for rec in reader.records() {
        let rec = rec.map_err(|e| IngestError::io(path, e))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != header.len() {
            return Err(IngestError::RaggedRows { line, expected: header.len(), actual: rec.len() });
        }
        let stamp = parse_instant(&rec[0]).ok_or_else(|| IngestError::Parse {
            line,
            column: "date".into(),
            message: format!("not an integer or ISO-8601 timestamp: `{}`", &rec[0]),
        })?;
        if let Some(prev) = stamps.last() {
            let increasing = match (prev, &stamp) {
                (Instant::Index(a), Instant::Index(b)) | (Instant::Epoch(a), Instant::Epoch(b)) => a < b,
                _ => false,
            };
            if !increasing {
                return Err(IngestError::Parse {
                    line,
                    column: "date".into(),
                    message: format!("timestamp `{}` is not strictly after the previous row", &rec[0]),
                });
            }
        }
        stamps.push(stamp);
        lines.push(line);
        for (k, &c) in selected.iter().enumerate() {
            let cell = &rec[c + 1];
            let value = if is_missing(cell) {
                None
            } else {
                let v: f64 = cell.parse().map_err(|_| IngestError::Parse {
                    line,
                    column: names[c].clone(),
                    message: format!("not a number: `{cell}`"),
                })?;
                if !v.is_finite() {
                    return Err(IngestError::Parse { line, column: names[c].clone(), message: format!("non-finite value `{cell}`") });
                }
                Some(v)
            };
            cols[k].push(value);
        }
    }

    let meta = SeriesMeta {
        frequency: manifest.frequency.or(side.frequency).unwrap_or_else(|| infer_frequency(&stamps)),
        seasonal_period: manifest.seasonal_period.or(side.seasonal_period),
    };
    let split = match manifest.split.as_ref().or(side.split.as_ref()) {
        Some(s) => SplitSpec::from_str(s)?,
        None => SplitSpec::default(),
    };
    let mut channels = Vec::with_capacity(cols.len());
    for (k, col) in cols.iter_mut().enumerate() {
        let values = fill(col, manifest.missing, &names[selected[k]], &lines)?;
        channels.push(validate_series(values, Some(stamps.clone()), &meta)?);
    }
    let channel_names = selected.iter().map(|&c| names[c].clone()).collect();
    let domain = manifest.domain.clone().or(side.domain).unwrap_or_else(|| "unknown".into());
    Ok(Dataset::new(manifest.display_name(), channel_names, channels, domain, split)?)
}

/// Frequency implied by the median spacing of epoch timestamps. Integer
/// indices and irregular spacings give [`Frequency::Other`].
pub fn infer_frequency(stamps: &[Instant]) -> Frequency {
    let mut gaps: Vec<i64> = stamps
        .windows(2)
        .filter_map(|w| match (w[0], w[1]) {
            (Instant::Epoch(a), Instant::Epoch(b)) => Some(b - a),
            _ => None,
        })
        .collect();
    if gaps.is_empty() {
        return Frequency::Other;
    }
    gaps.sort_unstable();
    const DAY: i64 = 86_400;
    match gaps[gaps.len() / 2] {
        3_600 => Frequency::Hourly,
        DAY => Frequency::Daily,
        604_800 => Frequency::Weekly,
        g if (28 * DAY..=31 * DAY).contains(&g) => Frequency::Monthly,
        g if (89 * DAY..=92 * DAY).contains(&g) => Frequency::Quarterly,
        g if (365 * DAY..=366 * DAY).contains(&g) => Frequency::Yearly,
        _ => Frequency::Other,
    }
}

/// [`load_dataset`] with sidecar settings and no overrides.
pub fn load_csv(path: impl AsRef<Path>) -> Result<Dataset, IngestError> {
    load_dataset(&DatasetManifest::new(path.as_ref()))
}

fn format_instant(i: Instant, date_only: bool) -> String {
    match i {
        Instant::Index(v) => v.to_string(),
        Instant::Epoch(s) => {
            let dt = DateTime::from_timestamp(s, 0).unwrap_or_default().naive_utc();
            if date_only {
                dt.format("%Y-%m-%d").to_string()
            } else {
                dt.format("%Y-%m-%dT%H:%M:%S").to_string()
            }
        }
    }
}

/// Writes `ds` in the canonical wide format. Untimed datasets get integer
/// indices `0..T`.
pub fn write_dataset_csv(ds: &Dataset, path: impl AsRef<Path>) -> Result<(), IngestError> {
    let path = path.as_ref();
    let mut out = String::from("date");
    for n in ds.channel_names() {
        out.push(',');
        out.push_str(n);
    }
    out.push('\n');
    let stamps = ds.channels()[0].timestamps();
    let date_only = stamps.is_some_and(|ts| {
        ts.iter().all(|t| match t {
            Instant::Epoch(s) => DateTime::from_timestamp(*s, 0).is_some_and(|d| d.num_seconds_from_midnight() == 0),
            Instant::Index(_) => true,
        })
    });
    for t in 0..ds.len() {
        match stamps {
            Some(ts) => out.push_str(&format_instant(ts[t], date_only)),
            None => out.push_str(&t.to_string()),
        }
        for c in ds.channels() {
            let _ = write!(out, ",{}", c.values()[t]);
        }
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| IngestError::io(path, e))
}
