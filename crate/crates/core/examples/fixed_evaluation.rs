//! Fixed-origin evaluation of univariate series with the per-frequency
//! horizon and a lookback of 1.25 times the horizon.
//!
//! cargo run --example fixed_evaluation

use tsbench::eval::{run_fixed, EvaluationPlan, Normalization, Strategy};
use tsbench::forecast::MethodSpec;
use tsbench::metrics::Metric;
use tsbench::model::{validate_series, Dataset, Frequency, SeriesMeta, SplitSpec};

fn main() {
    let freq = Frequency::Monthly;
    let horizon = freq.univariate_horizon();
    let meta = SeriesMeta { frequency: freq, seasonal_period: None };
    let y: Vec<f64> = (0..144)
        .map(|i| 100.0 + i as f64 + 15.0 * (2.0 * std::f64::consts::PI * i as f64 / 12.0).cos())
        .collect();
    let series = validate_series(y, None, &meta).unwrap();
    let ds = Dataset::new("airline-like", vec!["y".into()], vec![series], "tourism", SplitSpec::default()).unwrap();

    println!("monthly horizon {horizon}, seasonal period {}", ds.seasonal_period());
    for name in ["naive", "seasonal_naive", "ets", "linear_regression"] {
        let plan = EvaluationPlan::new(MethodSpec::new(name), Strategy::Fixed, horizon)
            .with_normalization(Normalization::None)
            .with_metrics(&[Metric::Smape, Metric::Mase]);
        let r = run_fixed(&ds, &plan).unwrap();
        println!(
            "{name:18} lookback {:2}  smape {:7.3}  mase {:.3}",
            r.lookback,
            r.value(Metric::Smape).unwrap(),
            r.value(Metric::Mase).unwrap()
        );
    }
}
