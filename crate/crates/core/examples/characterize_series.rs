//! Characteristic scores for a few synthetic series.
//!
//! cargo run --example characterize_series

use tsbench::characterize::{
    adf_test, profile_series, seasonality_strength, shifting_value, stl_decompose,
    transition_value, transition_value_capped, trend_strength, ProfileOptions,
};

/// Deterministic stand-in for noise in [-0.5, 0.5).
fn jitter(i: usize) -> f64 {
    ((i * i * 7919 + 13) % 1009) as f64 / 1009.0 - 0.5
}

fn main() {
    let n = 240;
    let seasonal: Vec<f64> = (0..n)
        .map(|i| (2.0 * std::f64::consts::PI * i as f64 / 12.0).sin() + 0.1 * jitter(i))
        .collect();
    let ramp: Vec<f64> = (0..n).map(|i| i as f64 * 0.5 + 0.1 * jitter(i)).collect();
    let step: Vec<f64> = (0..n)
        .map(|i| if i < n / 2 { 0.0 } else { 3.0 } + jitter(i))
        .collect();

    let d = stl_decompose(&seasonal, 12).unwrap();
    println!("STL of a sine: seasonal[0..4] = {:.3?}", &d.seasonal[..4]);

    for (name, x) in [("sine", &seasonal), ("ramp", &ramp), ("step", &step)] {
        let adf = adf_test(x).unwrap();
        println!(
            "{name:5} trend {:.3}  seasonality {:.3}  adf p {:.3} (lags {})  shifting {:.3}  transition {}  capped {:.4}",
            trend_strength(x, 12).unwrap(),
            seasonality_strength(x, 12).unwrap(),
            adf.pvalue,
            adf.lags,
            shifting_value(x, 100).unwrap(),
            transition_value(x).map_or("n/a".to_string(), |v| format!("{v:.4}")),
            transition_value_capped(x).unwrap(),
        );
    }

    let p = profile_series(&step, 12, &ProfileOptions::default()).unwrap();
    println!("\nprofile of the step series: {p:#?}");
}
