//! Every built-in method on one series, in direct and iterative mode.
//!
//! cargo run --example forecasters

use tsbench::forecast::{fit, predict, registered_methods, FitContext, HyperValue, MethodSpec, PredictionMode};

fn main() {
    let y: Vec<f64> = (0..120)
        .map(|i| 10.0 + 0.1 * i as f64 + 2.0 * (2.0 * std::f64::consts::PI * i as f64 / 12.0).sin())
        .collect();
    let z: Vec<f64> = y.iter().map(|v| 0.5 * v + 1.0).collect();
    let data: Vec<&[f64]> = vec![&y, &z];
    let ctx = FitContext { horizon: 6, lookback: 24, seasonal_period: 12 };

    println!("registered: {:?}\n", registered_methods());
    let specs = [
        MethodSpec::new("naive"),
        MethodSpec::new("seasonal_naive"),
        MethodSpec::new("linear_regression").with("lags", HyperValue::Int(12)),
        MethodSpec::new("var").with("order", HyperValue::Int(2)),
        MethodSpec::new("ets"),
    ];
    for spec in specs {
        for mode in [PredictionMode::Dms, PredictionMode::Ims] {
            let spec = spec.clone().mode(mode);
            let model = fit(&spec, &data, &ctx).unwrap();
            let fc = predict(&model, &data, 6).unwrap();
            let first: Vec<String> = fc.values[0].iter().map(|v| format!("{v:.2}")).collect();
            println!("{:32} {}", spec.label(), first.join(" "));
        }
    }

    let ramp: Vec<f64> = (0..40).map(|t| 2.0 * t as f64).collect();
    let spec = MethodSpec::new("linear_regression").with("lags", HyperValue::Int(3));
    let model = fit(&spec, &[&ramp], &FitContext { horizon: 3, lookback: 3, seasonal_period: 1 }).unwrap();
    println!("\ny = 2t continues as {:?}", predict(&model, &[&ramp], 3).unwrap().values[0]);
}
