//! Plugging in a method implemented as an external program. The program
//! here is a tiny shell script that repeats the last observation.
//!
//! cargo run --example external_method

use std::fs;

use tsbench::eval::{run_rolling, EvaluationPlan, Normalization, Strategy};
use tsbench::forecast::{HyperValue, MethodSpec};
use tsbench::metrics::Metric;
use tsbench::model::{Dataset, SplitSpec};

const SCRIPT: &str = "#!/bin/sh
# usage: repeat_last.sh history.csv request.meta forecast.csv
h=$(grep '^horizon=' \"$2\" | cut -d= -f2)
last=$(tail -n 1 \"$1\")
i=0
while [ $i -lt $h ]; do echo \"$last\"; i=$((i+1)); done > \"$3\"
";

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let script = dir.path().join("repeat_last.sh");
    fs::write(&script, SCRIPT).unwrap();

    let x: Vec<f64> = (0..80).map(|i| (i as f64 * 0.4).sin() * 5.0 + 20.0).collect();
    let ds = Dataset::from_columns("wave", vec![x], 1, SplitSpec::default()).unwrap();
    let external = MethodSpec::new("external")
        .with("command", HyperValue::Text(format!("sh {}", script.display())))
        .with("label", HyperValue::Text("repeat-last".into()));

    for spec in [external, MethodSpec::new("naive")] {
        let plan = EvaluationPlan::new(spec.clone(), Strategy::Rolling, 4)
            .with_normalization(Normalization::None)
            .with_metrics(&[Metric::Mae]);
        let r = run_rolling(&ds, &plan).unwrap();
        let row = r.row(Metric::Mae).unwrap();
        println!("{:40} mae {:.6} over {} windows ({} failed)", spec.label(), row.value.unwrap(), row.windows, row.failures);
    }
}
