//! Rolling evaluation over every test window, and why batch size does not
//! matter.
//!
//! cargo run --release --example rolling_evaluation

use tsbench::eval::{enumerate_rolling_windows, run_rolling, EvaluationPlan, Strategy};
use tsbench::forecast::MethodSpec;
use tsbench::metrics::Metric;
use tsbench::model::{Dataset, SplitSpec};

fn main() {
    let windows = enumerate_rolling_windows(2880, 336, 1).unwrap();
    println!("L=2880, F=336: {} windows", windows.len());
    for b in [32, 64, 128] {
        println!("  batch {b:3}: last batch holds {} windows", windows.len() % b);
    }
    println!("L=10, F=5, stride 3: offsets {:?}", enumerate_rolling_windows(10, 5, 3).unwrap());

    let x: Vec<f64> = (0..3000)
        .map(|i| (2.0 * std::f64::consts::PI * i as f64 / 24.0).sin() + 0.001 * i as f64 + ((i * 31 % 17) as f64) * 0.02)
        .collect();
    let ds = Dataset::from_columns("hourly", vec![x], 24, SplitSpec::default()).unwrap();
    let plan = EvaluationPlan::new(MethodSpec::new("seasonal_naive"), Strategy::Rolling, 336)
        .with_metrics(&[Metric::Mae, Metric::Mse]);
    for b in [1, 32, 64, 128] {
        let r = run_rolling(&ds, &plan.clone().with_batch_size(b)).unwrap();
        let mae = r.value(Metric::Mae).unwrap();
        let mse = r.value(Metric::Mse).unwrap();
        println!("batch {b:3}: windows {}  mae {mae:.12}  mse {mse:.12}", r.offsets.len());
    }
}
