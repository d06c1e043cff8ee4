use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tsbench::characterize::{profile_dataset, ProfileOptions, Thresholds};
use tsbench::ingest::{self, DatasetManifest};
use tsbench::metrics::Metric;
use tsbench::pipeline::{self, exit};
use tsbench::report::{self, ExportFormat, PlotKind, PlotSource, RankGranularity, ReportError, ResultRecord};

#[derive(Parser)]
#[command(name = "tsbench", version, about = "Evaluate forecasting methods reproducibly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print characteristic scores for a dataset CSV.
    Characterize {
        dataset: PathBuf,
        /// One row per channel instead of the dataset summary.
        #[arg(long)]
        per_channel: bool,
        /// Seasonal period; defaults to the sidecar or frequency default.
        #[arg(long)]
        period: Option<usize>,
        /// Use fixed shifting/transition cutoffs (0.5, 1/6) instead of the
        /// median over the dataset's channels.
        #[arg(long)]
        fixed_thresholds: bool,
    },
    /// Run every cell of a config and write results.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        parallel: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory, overriding the config.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Count best results per method.
    Rank {
        /// A results.csv file or a directory containing one.
        #[arg(long)]
        results: PathBuf,
        #[arg(long, default_value = "mae")]
        metric: Metric,
        #[arg(long)]
        higher_is_better: bool,
        /// Average horizons per dataset before ranking.
        #[arg(long)]
        per_dataset: bool,
    },
    /// Re-export results as csv or structured-text.
    Export {
        #[arg(long)]
        results: PathBuf,
        #[arg(long, default_value = "csv")]
        format: ExportFormat,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write tables for characteristic-radar, rank-bar or metric-vs-horizon plots.
    PlotData {
        #[arg(long)]
        kind: PlotKind,
        /// Results (rank-bar, metric-vs-horizon).
        #[arg(long)]
        results: Option<PathBuf>,
        /// Dataset CSV (characteristic-radar).
        #[arg(long)]
        dataset: Option<PathBuf>,
        #[arg(long, default_value = "mae")]
        metric: Metric,
        #[arg(long)]
        out: PathBuf,
    },
}

fn results_file(p: &Path) -> PathBuf {
    if p.is_dir() {
        p.join("results.csv")
    } else {
        p.to_path_buf()
    }
}

fn report_code(e: &ReportError) -> u8 {
    match e {
        ReportError::Io { .. } => exit::IO as u8,
        _ => exit::VALIDATION as u8,
    }
}

fn load_results(p: &Path) -> Result<Vec<ResultRecord>, u8> {
    report::read_results_csv(results_file(p)).map_err(|e| {
        eprintln!("error: {e}");
        report_code(&e)
    })
}

fn characterize(dataset: &Path, per_channel: bool, period: Option<usize>, fixed_thresholds: bool) -> Result<u8, u8> {
    let mut m = DatasetManifest::new(dataset);
    m.seasonal_period = period;
    let ds = ingest::load_dataset(&m).map_err(|e| {
        eprintln!("error: {e}");
        if matches!(e, ingest::IngestError::Io { .. }) { exit::IO as u8 } else { exit::VALIDATION as u8 }
    })?;
    let dp = profile_dataset(&ds, &ProfileOptions::default()).map_err(|e| {
        eprintln!("error: {e}");
        exit::VALIDATION as u8
    })?;
    let thresholds = if fixed_thresholds { Thresholds::default() } else { Thresholds::median_split(&dp.channels) };
    let rows: Vec<(String, _)> = if per_channel {
        ds.channel_names().iter().map(|n| format!("{}/{n}", ds.name())).zip(dp.channels.iter().copied()).collect()
    } else {
        vec![(ds.name().to_string(), dp.summary)]
    };
    print!("{}", report::profile_table(&rows, &thresholds));
    Ok(exit::SUCCESS as u8)
}

fn run(config: &Path, parallel: Option<usize>, seed: Option<u64>, output: Option<PathBuf>) -> Result<u8, u8> {
    let fail = |e: pipeline::PipelineError| {
        eprintln!("error: {e}");
        e.exit_code() as u8
    };
    let mut cfg = ingest::parse_config(config).map_err(|e| fail(e.into()))?;
    if let Some(p) = parallel {
        if p == 0 {
            eprintln!("error: --parallel must be at least 1");
            return Err(exit::VALIDATION as u8);
        }
        cfg.parallelism = p;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(o) = output {
        cfg.output_dir = std::env::current_dir().map(|d| d.join(o)).unwrap_or_default();
    }
    let summary = pipeline::run(&cfg).map_err(fail)?;
    eprintln!(
        "{} records, {} cells with failures, fingerprint {} -> {}",
        summary.records.len(),
        summary.failed_cells,
        summary.fingerprint,
        summary.results_path.display()
    );
    Ok(summary.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Characterize { dataset, per_channel, period, fixed_thresholds } => {
            characterize(&dataset, per_channel, period, fixed_thresholds)
        }
        Command::Run { config, parallel, seed, output } => run(&config, parallel, seed, output),
        Command::Rank { results, metric, higher_is_better, per_dataset } => load_results(&results).and_then(|records| {
            let granularity = if per_dataset { RankGranularity::PerDataset } else { RankGranularity::PerHorizon };
            match report::aggregate_ranks(&records, metric, !higher_is_better, granularity) {
                Ok(table) => {
                    print!("{table}");
                    Ok(exit::SUCCESS as u8)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Err(report_code(&e))
                }
            }
        }),
        Command::Export { results, format, out } => load_results(&results).and_then(|records| {
            report::export_results(&records, format, &out).map(|_| exit::SUCCESS as u8).map_err(|e| {
                eprintln!("error: {e}");
                report_code(&e)
            })
        }),
        Command::PlotData { kind, results, dataset, metric, out } => plot_data(kind, results, dataset, metric, &out),
    };
    ExitCode::from(outcome.unwrap_or_else(|code| code))
}

fn plot_data(kind: PlotKind, results: Option<PathBuf>, dataset: Option<PathBuf>, metric: Metric, out: &Path) -> Result<u8, u8> {
    let done = |r: Result<(), ReportError>| {
        r.map(|_| exit::SUCCESS as u8).map_err(|e| {
            eprintln!("error: {e}");
            report_code(&e)
        })
    };
    match kind {
        PlotKind::CharacteristicRadar => {
            let Some(path) = dataset else {
                eprintln!("error: characteristic-radar needs --dataset");
                return Err(exit::VALIDATION as u8);
            };
            let ds = ingest::load_dataset(&DatasetManifest::new(&path)).map_err(|e| {
                eprintln!("error: {e}");
                exit::VALIDATION as u8
            })?;
            let dp = profile_dataset(&ds, &ProfileOptions::default()).map_err(|e| {
                eprintln!("error: {e}");
                exit::VALIDATION as u8
            })?;
            let profiles = vec![(ds.name().to_string(), dp.summary)];
            done(report::emit_plot_data(kind, PlotSource::Profiles(&profiles), out))
        }
        PlotKind::RankBar | PlotKind::MetricVsHorizon => {
            let Some(path) = results else {
                eprintln!("error: this plot kind needs --results");
                return Err(exit::VALIDATION as u8);
            };
            let records = load_results(&path)?;
            if kind == PlotKind::RankBar {
                let table = match report::aggregate_ranks(&records, metric, true, RankGranularity::PerHorizon) {
                    Ok(t) => t,
                    Err(e) => return done(Err(e)),
                };
                done(report::emit_plot_data(kind, PlotSource::Ranks(&table), out))
            } else {
                done(report::emit_plot_data(kind, PlotSource::Records { records: &records, metric }, out))
            }
        }
    }
}
