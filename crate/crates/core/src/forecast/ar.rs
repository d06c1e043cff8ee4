//! Least-squares autoregressions.
//!
//! `linear_regression` fits an independent AR(p) with intercept to each
//! channel; `var` fits one VAR(p) with intercept jointly across channels.
//! In direct mode a separate regression is fitted for every step
//! `1..=horizon`, mapping the last `p` observations to the value `h` steps
//! ahead. In iterative mode only the one-step regression is fitted and
//! applied recursively. The one-step regression is the same in both modes.

use nalgebra::DMatrix;

use super::{ForecastError, PredictionMode};
use crate::linalg;

pub const MAX_VAR_ORDER: usize = 8;

/// One coefficient block: `y_{t+h-1}[targets] = intercept + sum_i lag_i . y_{t-i}[inputs]`.
#[derive(Debug, Clone, PartialEq)]
struct StepModel {
    /// Rows: `[1, y_{t-1}[inputs], ..., y_{t-p}[inputs]]`; columns: targets.
    coefficients: DMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq)]
struct Block {
    /// Channel indices used as regressors and predicted by this block.
    channels: Vec<usize>,
    /// `steps[h-1]` predicts h steps ahead. Only one entry in iterative mode.
    steps: Vec<StepModel>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArModel {
    order: usize,
    blocks: Vec<Block>,
}

impl ArModel {
    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient on channel `from` at lag `lag` in the one-step equation
    /// of channel `to`. `None` if `from` is not a regressor of `to`.
    pub fn one_step_coefficient(&self, to: usize, from: usize, lag: usize) -> Option<f64> {
        let block = self.blocks.iter().find(|b| b.channels.contains(&to))?;
        let ti = block.channels.iter().position(|&c| c == to)?;
        let fi = block.channels.iter().position(|&c| c == from)?;
        let n = block.channels.len();
        Some(block.steps[0].coefficients[(1 + (lag - 1) * n + fi, ti)])
    }

    pub fn fit_per_channel(
        train: &[&[f64]],
        lags: usize,
        horizon: usize,
        mode: PredictionMode,
    ) -> Result<Self, ForecastError> {
        let blocks = (0..train.len())
            .map(|c| fit_block(train, vec![c], lags, horizon, mode))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { order: lags, blocks })
    }

    pub fn fit_joint(
        train: &[&[f64]],
        order: usize,
        horizon: usize,
        mode: PredictionMode,
    ) -> Result<Self, ForecastError> {
        let n = train.len();
        let len = train[0].len();
        if len <= order * n + 1 {
            return Err(ForecastError::InsufficientData(format!(
                "VAR({order}) on {n} channels needs more than {} observations, got {len}",
                order * n + 1
            )));
        }
        let block = fit_block(train, (0..n).collect(), order, horizon, mode)?;
        Ok(Self { order, blocks: vec![block] })
    }

    pub fn predict(
        &self,
        history: &[&[f64]],
        horizon: usize,
        mode: PredictionMode,
    ) -> Result<Vec<Vec<f64>>, ForecastError> {
        let len = history[0].len();
        if len < self.order {
            return Err(ForecastError::InsufficientData(format!(
                "need {} points of history, got {len}",
                self.order
            )));
        }
        let mut out = vec![vec![0.0; horizon]; history.len()];
        for block in &self.blocks {
            match mode {
                PredictionMode::Dms => {
                    if horizon > block.steps.len() {
                        return Err(ForecastError::ShapeMismatch(format!(
                            "direct model fitted up to horizon {}, asked for {horizon}",
                            block.steps.len()
                        )));
                    }
                    let x = lag_row(history, &block.channels, self.order, len);
                    for (h, step) in block.steps.iter().take(horizon).enumerate() {
                        for (ti, &c) in block.channels.iter().enumerate() {
                            out[c][h] = dot_column(&x, &step.coefficients, ti);
                        }
                    }
                }
                PredictionMode::Ims => {
                    // last `order` observed values per block channel, extended by each prediction
                    let mut buf: Vec<Vec<f64>> =
                        block.channels.iter().map(|&c| history[c][len - self.order..].to_vec()).collect();
                    let local: Vec<usize> = (0..block.channels.len()).collect();
                    for _ in 0..horizon {
                        let views: Vec<&[f64]> = buf.iter().map(|v| v.as_slice()).collect();
                        let x = lag_row(&views, &local, self.order, views[0].len());
                        let next: Vec<f64> = (0..block.channels.len())
                            .map(|ti| dot_column(&x, &block.steps[0].coefficients, ti))
                            .collect();
                        for (b, v) in buf.iter_mut().zip(next) {
                            b.push(v);
                        }
                    }
                    for (b, &c) in buf.iter().zip(&block.channels) {
                        out[c] = b[self.order..].to_vec();
                    }
                }
            }
        }
        Ok(out)
    }
}

/// `[1, y_{end-1}[ch], ..., y_{end-p}[ch]]` grouped by lag.
fn lag_row(data: &[&[f64]], channels: &[usize], order: usize, end: usize) -> Vec<f64> {
    let mut row = Vec::with_capacity(1 + order * channels.len());
    row.push(1.0);
    for lag in 1..=order {
        for &c in channels {
            row.push(data[c][end - lag]);
        }
    }
    row
}

fn dot_column(x: &[f64], coef: &DMatrix<f64>, col: usize) -> f64 {
    x.iter().enumerate().map(|(i, v)| v * coef[(i, col)]).sum()
}

fn fit_block(
    train: &[&[f64]],
    channels: Vec<usize>,
    order: usize,
    horizon: usize,
    mode: PredictionMode,
) -> Result<Block, ForecastError> {
    let len = train[0].len();
    if order == 0 {
        return Err(ForecastError::InsufficientData("lag order must be positive".into()));
    }
    if len <= order {
        return Err(ForecastError::InsufficientData(format!(
            "{order} lags need more than {order} observations, got {len}"
        )));
    }
    let steps_needed = match mode {
        PredictionMode::Dms => horizon.max(1),
        PredictionMode::Ims => 1,
    };
    let k = 1 + order * channels.len();
    let mut steps = Vec::with_capacity(steps_needed);
    for h in 1..=steps_needed {
        // predictors end at t, target at t + h - 1; t ranges over order..=len-h
        if len < order + h {
            return Err(ForecastError::InsufficientData(format!(
                "no training rows for step {h} with {order} lags and {len} observations"
            )));
        }
        let rows = len - order - h + 1;
        let mut design = DMatrix::zeros(rows, k);
        let mut target = DMatrix::zeros(rows, channels.len());
        for r in 0..rows {
            let end = order + r;
            for (j, v) in lag_row(train, &channels, order, end).into_iter().enumerate() {
                design[(r, j)] = v;
            }
            for (ti, &c) in channels.iter().enumerate() {
                target[(r, ti)] = train[c][end + h - 1];
            }
        }
        let fit = linalg::least_squares(&design, &target).ok_or(ForecastError::SingularSystem)?;
        steps.push(StepModel { coefficients: fit.coefficients });
    }
    Ok(Block { channels, steps })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_ar1_coefficient() {
        use rand::SeedableRng;
        use rand_distr::{Distribution, Normal};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let noise = Normal::new(0.0, 0.3).unwrap();
        let mut y = vec![0.0];
        for t in 1..400 {
            y.push(0.6 * y[t - 1] + 1.0 + noise.sample(&mut rng));
        }
        let m = ArModel::fit_per_channel(&[&y], 1, 1, PredictionMode::Ims).unwrap();
        assert!((m.one_step_coefficient(0, 0, 1).unwrap() - 0.6).abs() < 0.05);
    }

    #[test]
    fn direct_needs_rows_for_every_step() {
        let y = [1.0, 2.0, 4.0, 3.0];
        assert!(ArModel::fit_per_channel(&[&y], 2, 3, PredictionMode::Dms).is_err());
        assert!(ArModel::fit_per_channel(&[&y], 2, 2, PredictionMode::Dms).is_ok());
    }

    #[test]
    fn var_data_requirement() {
        let a = [1.0, 2.0, 0.5, 3.0, 1.0];
        assert!(matches!(
            ArModel::fit_joint(&[&a, &a], 2, 1, PredictionMode::Ims),
            Err(ForecastError::InsufficientData(_))
        ));
    }
}
