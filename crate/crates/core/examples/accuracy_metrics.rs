//! The eight accuracy metrics on small hand-checkable inputs.
//!
//! cargo run --example accuracy_metrics

use tsbench::metrics::{compute_metric, compute_metric_multichannel, Metric, MetricContext};

fn main() {
    let train = [1.0, 2.0, 3.0, 4.0];
    let forecasts = [5.0, 5.0];
    let actuals = [5.0, 6.0];
    let ctx = MetricContext::new(&forecasts, &actuals).with_train(&train, 1);
    for m in Metric::ALL {
        println!("{m:7} {}", compute_metric(m, &ctx).unwrap());
    }

    let ctx = MetricContext::new(&[0.1], &[0.2]);
    println!("\nmsmape(0.1 vs 0.2) = {:.3}%", compute_metric(Metric::Msmape, &ctx).unwrap());
    let zero = MetricContext::new(&[1.0], &[0.0]);
    println!("mape with a zero actual: {}", compute_metric(Metric::Mape, &zero).unwrap_err());

    let f = vec![vec![1.0, 2.0], vec![10.0, 10.0]];
    let y = vec![vec![1.5, 2.5], vec![9.0, 12.0]];
    let tr = vec![vec![0.0, 1.0, 2.0], vec![8.0, 9.0, 11.0]];
    for m in [Metric::Mae, Metric::Mase] {
        println!("two channels, {m}: {}", compute_metric_multichannel(m, &f, &y, Some(&tr), 1, 0.1).unwrap());
    }
}
