//! Evaluates the demo config in memory, then ranks methods and writes plot
//! tables.
//!
//! cargo run --release --example rank_report

use std::path::Path;

use tsbench::ingest::parse_config;
use tsbench::metrics::Metric;
use tsbench::pipeline::evaluate_all;
use tsbench::report::{aggregate_ranks, metric_vs_horizon_table, rank_bar_table, results_csv, RankGranularity};

fn main() {
    let demo = Path::new(env!("CARGO_MANIFEST_DIR")).join("demo");
    let cfg = parse_config(demo.join("demo.toml")).unwrap();
    let records = evaluate_all(&cfg).unwrap();
    println!("{}", results_csv(&records).lines().take(4).collect::<Vec<_>>().join("\n"));

    for granularity in [RankGranularity::PerHorizon, RankGranularity::PerDataset] {
        let table = aggregate_ranks(&records, Metric::Mae, true, granularity).unwrap();
        println!("\n{granularity:?}\n{table}");
    }
    let table = aggregate_ranks(&records, Metric::Mse, true, RankGranularity::PerHorizon).unwrap();
    println!("rank-bar data:\n{}", rank_bar_table(&table).unwrap());
    println!("metric-vs-horizon data:\n{}", metric_vs_horizon_table(&records, Metric::Mae).unwrap());
}
