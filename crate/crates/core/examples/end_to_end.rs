//! The full pipeline: config in, result directory out, rerun compared byte
//! for byte.
//!
//! cargo run --release --example end_to_end

use std::fs;
use std::path::Path;

use tsbench::ingest::parse_config;
use tsbench::pipeline;

fn main() {
    let demo = Path::new(env!("CARGO_MANIFEST_DIR")).join("demo");
    let out = tempfile::tempdir().unwrap();
    let mut cfg = parse_config(demo.join("demo.toml")).unwrap();
    cfg.output_dir = out.path().join("a");
    cfg.parallelism = 1;
    let first = pipeline::run(&cfg).unwrap();

    cfg.output_dir = out.path().join("b");
    cfg.parallelism = 8;
    let second = pipeline::run(&cfg).unwrap();

    let a = fs::read(&first.results_path).unwrap();
    let b = fs::read(&second.results_path).unwrap();
    println!("{} records, exit code {}", first.records.len(), first.exit_code());
    println!("parallel 1 vs 8 identical: {}", a == b);
    println!("\nrun.log:\n{}", fs::read_to_string(first.output_dir.join("run.log")).unwrap());
}
