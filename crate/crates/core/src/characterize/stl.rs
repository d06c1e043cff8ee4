//! Seasonal-trend decomposition by loess.
//!
//! A direct port of Cleveland et al.'s inner loop (cycle-subseries
//! smoothing, low-pass filtering, detrending) with every smoother evaluated
//! at every point (no jump interpolation). The remainder is defined as
//! `x - trend - seasonal`, so the additive identity holds exactly.

use super::CharError;

/// Smoothing parameters. Spans must be odd and at least 3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StlParams {
    pub seasonal_span: usize,
    /// `None` selects the smallest odd integer `>= 1.5 p / (1 - 1.5 / seasonal_span)`.
    pub trend_span: Option<usize>,
    /// `None` selects the smallest odd integer `>= p`.
    pub low_pass_span: Option<usize>,
    pub seasonal_degree: usize,
    pub trend_degree: usize,
    pub low_pass_degree: usize,
    pub inner_iterations: usize,
    /// Passes of the outer loop. The first pass uses unit weights; every
    /// further pass recomputes bisquare robustness weights from the remainder.
    pub outer_iterations: usize,
}

impl Default for StlParams {
    fn default() -> Self {
        Self {
            seasonal_span: 7,
            trend_span: None,
            low_pass_span: None,
            seasonal_degree: 1,
            trend_degree: 1,
            low_pass_degree: 1,
            inner_iterations: 2,
            outer_iterations: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub trend: Vec<f64>,
    pub seasonal: Vec<f64>,
    pub remainder: Vec<f64>,
}

fn next_odd(x: f64) -> usize {
    let n = x.ceil().max(3.0) as usize;
    if n.is_multiple_of(2) {
        n + 1
    } else {
        n
    }
}

impl StlParams {
    pub fn resolved_trend_span(&self, period: usize) -> usize {
        self.trend_span.unwrap_or_else(|| {
            let ns = self.seasonal_span as f64;
            next_odd(1.5 * period as f64 / (1.0 - 1.5 / ns))
        })
    }

    pub fn resolved_low_pass_span(&self, period: usize) -> usize {
        self.low_pass_span.unwrap_or_else(|| next_odd(period as f64))
    }
}

/// Trend span used when there is no seasonal cycle to remove.
pub fn nonseasonal_trend_span(len: usize) -> usize {
    next_odd((len as f64 / 10.0).max(7.0))
}

pub fn stl_decompose(values: &[f64], period: usize) -> Result<Decomposition, CharError> {
    stl_decompose_with(values, period, &StlParams::default())
}

pub fn stl_decompose_with(
    values: &[f64],
    period: usize,
    params: &StlParams,
) -> Result<Decomposition, CharError> {
    let n = values.len();
    if period < 2 {
        if n < 3 {
            return Err(CharError::TooShort { needed: 3, actual: n });
        }
        let weights = vec![1.0; n];
        let mut trend = vec![0.0; n];
        loess_smooth(values, nonseasonal_trend_span(n), params.trend_degree, false, &weights, &mut trend);
        let remainder = values.iter().zip(&trend).map(|(x, t)| x - t).collect();
        return Ok(Decomposition { trend, seasonal: vec![0.0; n], remainder });
    }
    if n < 2 * period + 1 {
        return Err(CharError::TooShort { needed: 2 * period + 1, actual: n });
    }

    let ns = params.seasonal_span.max(3) | 1;
    let nt = params.resolved_trend_span(period);
    let nl = params.resolved_low_pass_span(period);

    let mut trend = vec![0.0; n];
    let mut seasonal = vec![0.0; n];
    let mut robustness = vec![1.0; n];
    let outer = params.outer_iterations.max(1);
    for pass in 0..outer {
        let use_weights = pass > 0;
        for _ in 0..params.inner_iterations.max(1) {
            inner_step(
                values,
                period,
                ns,
                nt,
                nl,
                params,
                use_weights.then_some(robustness.as_slice()),
                &mut trend,
                &mut seasonal,
            );
        }
        if pass + 1 < outer {
            robustness = robustness_weights(values, &trend, &seasonal);
        }
    }

    let remainder = values
        .iter()
        .zip(&trend)
        .zip(&seasonal)
        .map(|((x, t), s)| x - t - s)
        .collect();
    Ok(Decomposition { trend, seasonal, remainder })
}

#[allow(clippy::too_many_arguments)]
fn inner_step(
    y: &[f64],
    np: usize,
    ns: usize,
    nt: usize,
    nl: usize,
    params: &StlParams,
    rw: Option<&[f64]>,
    trend: &mut [f64],
    seasonal: &mut [f64],
) {
    let n = y.len();
    let detrended: Vec<f64> = y.iter().zip(trend.iter()).map(|(a, b)| a - b).collect();

    // cycle-subseries smoothing, extended one cycle on each side
    let mut cycle = vec![0.0; n + 2 * np];
    for j in 0..np {
        let sub: Vec<f64> = detrended.iter().skip(j).step_by(np).copied().collect();
        let sub_rw: Vec<f64> = match rw {
            Some(w) => w.iter().skip(j).step_by(np).copied().collect(),
            None => vec![1.0; sub.len()],
        };
        let k = sub.len();
        let mut smoothed = vec![0.0; k + 2];
        loess_smooth(&sub, ns, params.seasonal_degree, rw.is_some(), &sub_rw, &mut smoothed[1..=k]);

        let right = ns.min(k);
        smoothed[0] = loess_point(&sub, ns, params.seasonal_degree, 0.0, 1, right, rw.is_some(), &sub_rw)
            .unwrap_or(smoothed[1]);
        let left = if k >= ns { k - ns + 1 } else { 1 };
        smoothed[k + 1] =
            loess_point(&sub, ns, params.seasonal_degree, (k + 1) as f64, left, k, rw.is_some(), &sub_rw)
                .unwrap_or(smoothed[k]);

        for (m, v) in smoothed.into_iter().enumerate() {
            cycle[m * np + j] = v;
        }
    }

    // low-pass filter of the cycle series: MA(np), MA(np), MA(3), loess(nl)
    let ma1 = moving_average(&cycle, np);
    let ma2 = moving_average(&ma1, np);
    let ma3 = moving_average(&ma2, 3);
    debug_assert_eq!(ma3.len(), n);
    let ones = vec![1.0; n];
    let mut low = vec![0.0; n];
    loess_smooth(&ma3, nl, params.low_pass_degree, false, &ones, &mut low);

    for i in 0..n {
        seasonal[i] = cycle[np + i] - low[i];
    }

    let deseasoned: Vec<f64> = y.iter().zip(seasonal.iter()).map(|(a, b)| a - b).collect();
    let w = rw.map(|w| w.to_vec()).unwrap_or_else(|| vec![1.0; n]);
    loess_smooth(&deseasoned, nt, params.trend_degree, rw.is_some(), &w, trend);
}

fn moving_average(x: &[f64], len: usize) -> Vec<f64> {
    let out_len = x.len() + 1 - len;
    let mut out = Vec::with_capacity(out_len);
    let mut sum: f64 = x[..len].iter().sum();
    out.push(sum / len as f64);
    for i in 1..out_len {
        sum += x[i + len - 1] - x[i - 1];
        out.push(sum / len as f64);
    }
    out
}

fn robustness_weights(y: &[f64], trend: &[f64], seasonal: &[f64]) -> Vec<f64> {
    let resid: Vec<f64> = (0..y.len()).map(|i| (y[i] - trend[i] - seasonal[i]).abs()).collect();
    let mut sorted = resid.clone();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let mid = sorted.len() / 2;
    let median = if sorted.len().is_multiple_of(2) { 0.5 * (sorted[mid - 1] + sorted[mid]) } else { sorted[mid] };
    let h = 6.0 * median;
    resid
        .iter()
        .map(|r| {
            if h == 0.0 {
                1.0
            } else {
                let u = r / h;
                if u <= 0.001 {
                    1.0
                } else if u <= 0.999 {
                    (1.0 - u * u).powi(2)
                } else {
                    0.0
                }
            }
        })
        .collect()
}

/// Loess fit evaluated at every index `1..=n` of `y`. `use_rw` toggles
/// whether `rw` multiplies the neighbourhood weights.
fn loess_smooth(y: &[f64], span: usize, degree: usize, use_rw: bool, rw: &[f64], out: &mut [f64]) {
    let n = y.len();
    if n < 2 {
        out[..n].copy_from_slice(y);
        return;
    }
    if span >= n {
        for i in 1..=n {
            out[i - 1] = loess_point(y, span, degree, i as f64, 1, n, use_rw, rw).unwrap_or(y[i - 1]);
        }
        return;
    }
    let half = span.div_ceil(2);
    let mut left = 1;
    let mut right = span;
    for i in 1..=n {
        if i > half && right != n {
            left += 1;
            right += 1;
        }
        out[i - 1] = loess_point(y, span, degree, i as f64, left, right, use_rw, rw).unwrap_or(y[i - 1]);
    }
}

/// Weighted local polynomial (degree 0 or 1) at 1-based position `xs`
/// using points `left..=right`. `None` when every weight vanishes.
#[allow(clippy::too_many_arguments)]
fn loess_point(
    y: &[f64],
    span: usize,
    degree: usize,
    xs: f64,
    left: usize,
    right: usize,
    use_rw: bool,
    rw: &[f64],
) -> Option<f64> {
    let n = y.len();
    let range = n as f64 - 1.0;
    let mut h = (xs - left as f64).max(right as f64 - xs);
    if span > n {
        h += ((span - n) / 2) as f64;
    }
    let h9 = 0.999 * h;
    let h1 = 0.001 * h;

    let mut w = vec![0.0; right - left + 1];
    let mut total = 0.0;
    for (slot, j) in (left..=right).enumerate() {
        let r = (j as f64 - xs).abs();
        if r <= h9 {
            let mut wj = if r <= h1 { 1.0 } else { (1.0 - (r / h).powi(3)).powi(3) };
            if use_rw {
                wj *= rw[j - 1];
            }
            w[slot] = wj;
            total += wj;
        }
    }
    if total <= 0.0 {
        return None;
    }
    for wj in &mut w {
        *wj /= total;
    }
    if h > 0.0 && degree > 0 {
        let a: f64 = w.iter().enumerate().map(|(s, wj)| wj * (left + s) as f64).sum();
        let mut b = xs - a;
        let c: f64 = w
            .iter()
            .enumerate()
            .map(|(s, wj)| wj * ((left + s) as f64 - a).powi(2))
            .sum();
        if c.sqrt() > 0.001 * range {
            b /= c;
            for (s, wj) in w.iter_mut().enumerate() {
                *wj *= b * ((left + s) as f64 - a) + 1.0;
            }
        }
    }
    Some(w.iter().enumerate().map(|(s, wj)| wj * y[left + s - 1]).sum())
}
