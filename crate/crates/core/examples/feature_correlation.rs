//! Feature vectors, the correlation score of a multivariate dataset, and
//! variance-based channel selection.
//!
//! cargo run --example feature_correlation

use tsbench::characterize::{
    correlation_score, feature_vector, pfa_select, CorrelationOptions, FEATURE_NAMES,
};

fn main() {
    let n = 300;
    let base: Vec<f64> = (0..n).map(|i| (i as f64 * 0.2).sin() + 0.02 * i as f64).collect();
    let shifted: Vec<f64> = base.iter().map(|v| 3.0 * v + 1.0).collect();
    let other: Vec<f64> = (0..n).map(|i| ((i * 7919 % 101) as f64 / 101.0) - 0.5).collect();

    let f = feature_vector(&base).unwrap();
    for (name, v) in FEATURE_NAMES.iter().zip(f.as_slice()).take(6) {
        println!("{name:40} {v:.4}");
    }

    let opts = CorrelationOptions::default();
    println!("\nidentical channels:  {:.6}", correlation_score(&[&base, &base, &base], opts).unwrap());
    println!("affine copy + noise: {:.6}", correlation_score(&[&base, &shifted, &other], opts).unwrap());
    let std_opts = CorrelationOptions { standardize_features: true };
    println!("standardized:        {:.6}", correlation_score(&[&base, &shifted, &other], std_opts).unwrap());

    let chosen = pfa_select(&[&base, &shifted, &other], 0.9).unwrap();
    println!("\nchannels kept for 90% of feature variance: {chosen:?}");
}
