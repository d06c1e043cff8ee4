use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use tsbench::eval::{self, EvaluationPlan, Strategy};
use tsbench::forecast::{self, FitContext, HyperValue, MethodSpec, PredictionMode};
use tsbench::metrics::Metric;
use tsbench::model::{Dataset, SplitSpec};

fn noisy_sine(seed: u64, n: usize) -> Vec<f64> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let d = Normal::new(0.0, 0.2).unwrap();
    (0..n).map(|t| (t as f64 * 0.25).sin() + 0.01 * t as f64 + d.sample(&mut r)).collect()
}

#[test]
fn univariate_var_matches_linear_regression() {
    let x = noisy_sine(1, 300);
    let ctx = FitContext { horizon: 8, lookback: 4, seasonal_period: 1 };
    for mode in [PredictionMode::Dms, PredictionMode::Ims] {
        let var = MethodSpec::new("var").with("order", HyperValue::Int(4)).mode(mode);
        let lr = MethodSpec::new("linear_regression").with("lags", HyperValue::Int(4)).mode(mode);
        let a = forecast::predict(&forecast::fit(&var, &[&x], &ctx).unwrap(), &[&x], 8).unwrap();
        let b = forecast::predict(&forecast::fit(&lr, &[&x], &ctx).unwrap(), &[&x], 8).unwrap();
        for (u, v) in a.values[0].iter().zip(&b.values[0]) {
            assert!((u - v).abs() < 1e-8, "{mode}: {u} vs {v}");
        }
    }
}

#[test]
fn fitting_is_deterministic() {
    let x = noisy_sine(2, 200);
    let y = noisy_sine(3, 200);
    let ctx = FitContext { horizon: 12, lookback: 15, seasonal_period: 25 };
    for name in ["naive", "seasonal_naive", "linear_regression", "var", "ets"] {
        let spec = MethodSpec::new(name);
        let a = forecast::fit(&spec, &[&x, &y], &ctx).unwrap();
        let b = forecast::fit(&spec, &[&x, &y], &ctx).unwrap();
        assert_eq!(a, b, "{name}");
        let fa = forecast::predict(&a, &[&x, &y], 12).unwrap();
        let fb = forecast::predict(&b, &[&x, &y], 12).unwrap();
        assert_eq!(fa, fb, "{name}");
    }
}

#[test]
fn rolling_evaluation_is_repeatable_for_every_method() {
    let ds = Dataset::from_columns(
        "s",
        vec![noisy_sine(4, 260), noisy_sine(5, 260)],
        25,
        SplitSpec::new(7, 1, 2).unwrap(),
    )
    .unwrap();
    for name in ["naive", "seasonal_naive", "linear_regression", "var", "ets"] {
        let plan = EvaluationPlan::new(MethodSpec::new(name), Strategy::Rolling, 6)
            .with_metrics(&Metric::ALL)
            .with_stride(4);
        let a = eval::run(&ds, &plan).unwrap();
        let b = eval::run(&ds, &plan.clone().with_batch_size(5)).unwrap();
        assert_eq!(a, b, "{name}");
        assert!(a.rows.iter().all(|r| r.failures == 0), "{name}: {:?}", a.rows);
    }
}

#[test]
fn seasonal_naive_beats_naive_on_a_clean_cycle() {
    let x: Vec<f64> = (0..400).map(|t| ((t % 24) as f64 - 12.0).abs()).collect();
    let ds = Dataset::from_columns("cycle", vec![x], 24, SplitSpec::new(7, 1, 2).unwrap()).unwrap();
    let mae = |name: &str| {
        let plan = EvaluationPlan::new(MethodSpec::new(name), Strategy::Rolling, 12).with_metrics(&[Metric::Mae]);
        eval::run(&ds, &plan).unwrap().value(Metric::Mae).unwrap()
    };
    assert_eq!(mae("seasonal_naive"), 0.0);
    assert!(mae("naive") > 0.5);
}
