//! Loading the demo CSVs and validating the demo run config.
//!
//! cargo run --example load_and_configure

use std::path::Path;

use tsbench::ingest::{load_csv, parse_config, parse_config_str};

fn main() {
    let demo = Path::new(env!("CARGO_MANIFEST_DIR")).join("demo");
    let ds = load_csv(demo.join("sensors.csv")).unwrap();
    let split = ds.split_ranges().unwrap();
    println!(
        "{}: {} channels {:?}, {} points, period {}, domain {}, split {} -> train {:?} val {:?} test {:?}",
        ds.name(),
        ds.n_channels(),
        ds.channel_names(),
        ds.len(),
        ds.seasonal_period(),
        ds.domain(),
        ds.split(),
        split.train,
        split.val,
        split.test
    );

    let cfg = parse_config(demo.join("demo.toml")).unwrap();
    println!("\n{} cells, fingerprint {}", cfg.cells().len(), cfg.fingerprint());
    println!("canonical form starts:\n{}", cfg.canonical_toml().lines().take(10).collect::<Vec<_>>().join("\n"));

    let bad = "metrics = [\"mape2\"]\n[[datasets]]\npath = \"walk.csv\"\nhorizons = [12]\n[[methods]]\nname = \"naive\"\n";
    println!("\nrejected: {}", parse_config_str(bad, &demo).unwrap_err());
    let too_long = "[[datasets]]\npath = \"walk.csv\"\nhorizons = [500]\n[[methods]]\nname = \"naive\"\n";
    println!("rejected: {}", parse_config_str(too_long, &demo).unwrap_err());
}
