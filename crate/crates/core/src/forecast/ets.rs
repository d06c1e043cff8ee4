//! Additive Holt-Winters smoothing (level, trend, additive season) per
//! channel, in error-correction form:
//!
//! ```text
//! e   = y_t - (l + b + s[t mod m])
//! l  += b + alpha * e
//! b  += alpha * beta * e
//! s[t mod m] += gamma * (1 - alpha) * e
//! ```
//!
//! This is algebraically the textbook recursion; the error form leaves the
//! state untouched when a forecast is exact, so constant inputs give
//! constant forecasts bit for bit. Smoothing parameters are chosen per
//! channel by grid search over `{0.1, ..., 0.9}^3` minimising in-sample
//! one-step MSE (first minimum in grid order wins). Series shorter than two
//! cycles, or with period 1, drop the seasonal term.

use super::{ForecastError, PredictionMode};

const GRID: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Smoothing {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EtsModel {
    period: usize,
    params: Vec<Smoothing>,
}

struct State {
    level: f64,
    trend: f64,
    season: Vec<f64>,
    /// index into `season` for the next observation
    phase: usize,
}

impl State {
    fn init(y: &[f64], period: usize) -> Self {
        if period >= 2 {
            let first = &y[..period];
            let second = &y[period..2 * period];
            let m1 = first.iter().sum::<f64>() / period as f64;
            let m2 = second.iter().sum::<f64>() / period as f64;
            Self {
                level: m1,
                trend: (m2 - m1) / period as f64,
                season: first.iter().map(|v| v - m1).collect(),
                phase: 0,
            }
        } else {
            let trend = if y.len() >= 2 { y[1] - y[0] } else { 0.0 };
            Self { level: y[0] - trend, trend, season: vec![0.0], phase: 0 }
        }
    }

    fn one_step(&self) -> f64 {
        self.level + self.trend + self.season[self.phase]
    }

    fn update(&mut self, y: f64, p: &Smoothing) -> f64 {
        let e = y - self.one_step();
        self.level += self.trend + p.alpha * e;
        self.trend += p.alpha * p.beta * e;
        if self.season.len() > 1 {
            self.season[self.phase] += p.gamma * (1.0 - p.alpha) * e;
        }
        self.phase = (self.phase + 1) % self.season.len();
        e
    }
}

fn effective_period(len: usize, period: usize) -> usize {
    if period >= 2 && len >= 2 * period {
        period
    } else {
        1
    }
}

fn filter(y: &[f64], period: usize, p: &Smoothing) -> (State, f64) {
    let mut state = State::init(y, period);
    let mut sse = 0.0;
    for &v in y {
        let e = state.update(v, p);
        sse += e * e;
    }
    (state, sse / y.len() as f64)
}

impl EtsModel {
    pub fn fit(train: &[&[f64]], period: usize) -> Result<Self, ForecastError> {
        let len = train[0].len();
        if len < 2 {
            return Err(ForecastError::InsufficientData(format!("ets needs 2 points, got {len}")));
        }
        let period = effective_period(len, period);
        let params = train.iter().map(|c| grid_search(c, period)).collect();
        Ok(Self { period, params })
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn smoothing(&self) -> &[Smoothing] {
        &self.params
    }

    pub fn predict(
        &self,
        history: &[&[f64]],
        horizon: usize,
        mode: PredictionMode,
    ) -> Result<Vec<Vec<f64>>, ForecastError> {
        let len = history[0].len();
        let period = effective_period(len, self.period);
        if len < 2 {
            return Err(ForecastError::InsufficientData(format!("ets needs 2 points, got {len}")));
        }
        Ok(history
            .iter()
            .zip(&self.params)
            .map(|(c, p)| {
                let (mut state, _) = filter(c, period, p);
                match mode {
                    PredictionMode::Dms => (1..=horizon)
                        .map(|h| {
                            let s = state.season[(state.phase + h - 1) % state.season.len()];
                            state.level + h as f64 * state.trend + s
                        })
                        .collect(),
                    PredictionMode::Ims => (0..horizon)
                        .map(|_| {
                            let f = state.one_step();
                            state.update(f, p);
                            f
                        })
                        .collect(),
                }
            })
            .collect())
    }
}

fn grid_search(y: &[f64], period: usize) -> Smoothing {
    let gammas: &[f64] = if period >= 2 { &GRID } else { &GRID[..1] };
    let mut best = (f64::INFINITY, Smoothing { alpha: GRID[0], beta: GRID[0], gamma: GRID[0] });
    for &alpha in &GRID {
        for &beta in &GRID {
            for &gamma in gammas {
                let p = Smoothing { alpha, beta, gamma };
                let (_, mse) = filter(y, period, &p);
                if mse < best.0 {
                    best = (mse, p);
                }
            }
        }
    }
    best.1
}
