//! A fixed 22-feature summary of a single series, used to compare channels
//! of a multivariate dataset.
//!
//! Names follow the canonical catch22 feature names where a feature plays
//! the same role, but the definitions below are this crate's own and are
//! not numerically interchangeable with other catch22 implementations.
//! Apart from `mean` and `variance`, every feature is computed on the
//! population z-scored series.
//!
//! | idx | name | definition |
//! |----:|------|------------|
//! | 0 | `mean` | arithmetic mean of the raw series |
//! | 1 | `variance` | population variance of the raw series |
//! | 2 | `acf_lag1` | autocorrelation at lag 1 |
//! | 3 | `CO_FirstZero_ac` | first lag with autocorrelation `<= 0` |
//! | 4 | `SB_TransitionMatrix_3ac_sumdiagcov` | transition score ([`transition_value`]) |
//! | 5 | `CO_f1ecac` | first lag with autocorrelation `< 1/e` (capped like the zero crossing) |
//! | 6 | `CO_FirstMin_ac` | first local minimum of the autocorrelation |
//! | 7 | `DN_HistogramMode_5` | centre of the fullest of 5 equal-width bins |
//! | 8 | `DN_HistogramMode_10` | centre of the fullest of 10 equal-width bins |
//! | 9 | `DN_OutlierInclude_p_001_mdrmd` | median over thresholds 0, 0.01, ... of the scaled median time index of points `>=` threshold |
//! | 10 | `DN_OutlierInclude_n_001_mdrmd` | same on the negated series |
//! | 11 | `SB_BinaryStats_mean_longstretch1` | longest run of points above the mean |
//! | 12 | `SB_BinaryStats_diff_longstretch0` | longest run of non-increasing steps |
//! | 13 | `CO_trev_1_num` | mean cubed first difference |
//! | 14 | `MD_hrv_classic_pnn40` | fraction of absolute first differences above 0.04 |
//! | 15 | `CO_HistogramAMI_even_2_5` | lag-2 automutual information, 5 equal-width bins |
//! | 16 | `IN_AutoMutualInfoStats_40_gaussian_fmmi` | first minimum of the Gaussian automutual information over lags 1..=40 |
//! | 17 | `SB_MotifThree_quantile_hh` | entropy of consecutive symbol pairs over 3 rank bins |
//! | 18 | `SP_Summaries_welch_rect_centroid` | power-weighted mean angular frequency of the periodogram |
//! | 19 | `SP_Summaries_welch_rect_area_5_1` | share of periodogram power in the lowest fifth of frequencies |
//! | 20 | `FC_LocalSimple_mean1_tauresrat` | first ACF zero of one-step-naive residuals over that of the series |
//! | 21 | `FC_LocalSimple_mean3_stderr` | standard deviation of residuals of a 3-point moving-mean forecast |
//!
//! Constant series map to the all-zero vector, and any individual feature
//! that is undefined or non-finite is reported as 0.

use rustfft::{num_complex::Complex, FftPlanner};

use super::acf::{acf, first_zero_acf, zero_crossing_cap};
use super::transition::{rank_symbols, transition_value};
use super::CharError;
use crate::stats;

pub const FEATURE_COUNT: usize = 22;
pub const MIN_LEN: usize = 20;
pub const TRANSITION_INDEX: usize = 4;
pub const FIRST_ZERO_INDEX: usize = 3;
pub const ACF_LAG1_INDEX: usize = 2;

pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "mean",
    "variance",
    "acf_lag1",
    "CO_FirstZero_ac",
    "SB_TransitionMatrix_3ac_sumdiagcov",
    "CO_f1ecac",
    "CO_FirstMin_ac",
    "DN_HistogramMode_5",
    "DN_HistogramMode_10",
    "DN_OutlierInclude_p_001_mdrmd",
    "DN_OutlierInclude_n_001_mdrmd",
    "SB_BinaryStats_mean_longstretch1",
    "SB_BinaryStats_diff_longstretch0",
    "CO_trev_1_num",
    "MD_hrv_classic_pnn40",
    "CO_HistogramAMI_even_2_5",
    "IN_AutoMutualInfoStats_40_gaussian_fmmi",
    "SB_MotifThree_quantile_hh",
    "SP_Summaries_welch_rect_centroid",
    "SP_Summaries_welch_rect_area_5_1",
    "FC_LocalSimple_mean1_tauresrat",
    "FC_LocalSimple_mean3_stderr",
];

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector(pub [f64; FEATURE_COUNT]);

impl FeatureVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        FEATURE_NAMES.iter().position(|n| *n == name).map(|i| self.0[i])
    }
}

pub fn feature_vector(x: &[f64]) -> Result<FeatureVector, CharError> {
    if x.len() < MIN_LEN {
        return Err(CharError::TooShort { needed: MIN_LEN, actual: x.len() });
    }
    let mut f = [0.0; FEATURE_COUNT];
    let Some(z) = stats::zscore(x) else {
        return Ok(FeatureVector(f));
    };
    let cap = zero_crossing_cap(z.len());
    let r = acf(x, cap.max(40.min(x.len() - 1)))?;

    f[0] = stats::mean(x);
    f[1] = stats::variance(x);
    f[2] = r[1];
    f[3] = first_zero_acf(x).map_or(0.0, |t| t as f64);
    f[4] = transition_value(x).unwrap_or(0.0);
    f[5] = first_below(&r, cap, (-1.0f64).exp()) as f64;
    f[6] = first_local_min(&r, cap) as f64;
    f[7] = histogram_mode(&z, 5);
    f[8] = histogram_mode(&z, 10);
    f[9] = outlier_timing(&z);
    f[10] = outlier_timing(&z.iter().map(|v| -v).collect::<Vec<_>>());
    f[11] = longest_run(z.iter().map(|&v| v > 0.0)) as f64;
    f[12] = longest_run(z.windows(2).map(|w| w[1] - w[0] <= 0.0)) as f64;
    f[13] = stats::mean(&z.windows(2).map(|w| (w[1] - w[0]).powi(3)).collect::<Vec<_>>());
    f[14] = z.windows(2).filter(|w| (w[1] - w[0]).abs() > 0.04).count() as f64 / (z.len() - 1) as f64;
    f[15] = histogram_ami(&z, 2, 5);
    f[16] = gaussian_ami_first_min(&r) as f64;
    f[17] = motif_pair_entropy(&z);
    let (centroid, low_area) = spectral_summaries(&z);
    f[18] = centroid;
    f[19] = low_area;
    f[20] = local_mean_tau_ratio(&z);
    f[21] = local_mean3_stderr(&z);

    for v in &mut f {
        if !v.is_finite() {
            *v = 0.0;
        }
    }
    Ok(FeatureVector(f))
}

fn first_below(r: &[f64], cap: usize, level: f64) -> usize {
    (1..=cap).find(|&k| r[k] < level).unwrap_or(cap)
}

fn first_local_min(r: &[f64], cap: usize) -> usize {
    (1..cap.min(r.len() - 1)).find(|&k| r[k] < r[k - 1] && r[k] < r[k + 1]).unwrap_or(cap)
}

fn histogram_bins(z: &[f64], bins: usize) -> Vec<usize> {
    let lo = z.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = (hi - lo) / bins as f64;
    z.iter()
        .map(|v| (((v - lo) / width).floor() as usize).min(bins - 1))
        .collect()
}

fn histogram_mode(z: &[f64], bins: usize) -> f64 {
    let lo = z.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for b in histogram_bins(z, bins) {
        counts[b] += 1;
    }
    let best = counts
        .iter()
        .enumerate()
        .fold((0, 0), |acc, (i, &c)| if c > acc.1 { (i, c) } else { acc })
        .0;
    lo + (best as f64 + 0.5) * width
}

fn outlier_timing(z: &[f64]) -> f64 {
    let n = z.len();
    let zmax = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut scores = Vec::new();
    let mut k = 0usize;
    loop {
        let th = 0.01 * k as f64;
        if th > zmax {
            break;
        }
        let idx: Vec<f64> = z
            .iter()
            .enumerate()
            .filter(|(_, &v)| v >= th)
            .map(|(i, _)| i as f64)
            .collect();
        if idx.len() >= 2 {
            scores.push(2.0 * stats::median(&idx) / (n - 1) as f64 - 1.0);
        }
        k += 1;
    }
    if scores.is_empty() {
        0.0
    } else {
        stats::median(&scores)
    }
}

fn longest_run(flags: impl Iterator<Item = bool>) -> usize {
    let mut best = 0;
    let mut cur = 0;
    for f in flags {
        if f {
            cur += 1;
            best = best.max(cur);
        } else {
            cur = 0;
        }
    }
    best
}

fn entropy_of(counts: &[f64], total: f64) -> f64 {
    counts
        .iter()
        .filter(|&&c| c > 0.0)
        .map(|&c| {
            let p = c / total;
            -p * p.ln()
        })
        .sum()
}

fn histogram_ami(z: &[f64], lag: usize, bins: usize) -> f64 {
    let b = histogram_bins(z, bins);
    let pairs = b.len() - lag;
    let mut joint = vec![0.0; bins * bins];
    let mut left = vec![0.0; bins];
    let mut right = vec![0.0; bins];
    for i in 0..pairs {
        joint[b[i] * bins + b[i + lag]] += 1.0;
        left[b[i]] += 1.0;
        right[b[i + lag]] += 1.0;
    }
    let total = pairs as f64;
    entropy_of(&left, total) + entropy_of(&right, total) - entropy_of(&joint, total)
}

fn gaussian_ami_first_min(r: &[f64]) -> usize {
    let max_lag = 40.min(r.len() - 1);
    let ami: Vec<f64> = (0..=max_lag)
        .map(|k| {
            let c = r[k].clamp(-0.999_999, 0.999_999);
            -0.5 * (1.0 - c * c).ln()
        })
        .collect();
    (1..max_lag).find(|&k| ami[k] < ami[k - 1] && ami[k] < ami[k + 1]).unwrap_or(max_lag)
}

fn motif_pair_entropy(z: &[f64]) -> f64 {
    let s = rank_symbols(z);
    let mut counts = [0.0; 9];
    for w in s.windows(2) {
        counts[w[0] * 3 + w[1]] += 1.0;
    }
    entropy_of(&counts, (s.len() - 1) as f64)
}

fn spectral_summaries(z: &[f64]) -> (f64, f64) {
    let n = z.len();
    let mut buf: Vec<Complex<f64>> = z.iter().map(|&v| Complex::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let half = n / 2;
    let power: Vec<f64> = buf[..=half].iter().map(|c| c.norm_sqr() / n as f64).collect();
    let freqs: Vec<f64> = (0..=half).map(|k| 2.0 * std::f64::consts::PI * k as f64 / n as f64).collect();
    let total: f64 = power.iter().sum();
    if total == 0.0 {
        return (0.0, 0.0);
    }
    let centroid = power.iter().zip(&freqs).map(|(p, w)| p * w).sum::<f64>() / total;
    let cutoff = power.len().div_ceil(5);
    let low = power[..cutoff].iter().sum::<f64>() / total;
    (centroid, low)
}

fn local_mean_tau_ratio(z: &[f64]) -> f64 {
    let resid: Vec<f64> = z.windows(2).map(|w| w[1] - w[0]).collect();
    match (first_zero_acf(&resid), first_zero_acf(z)) {
        (Ok(a), Ok(b)) => a as f64 / b as f64,
        _ => 0.0,
    }
}

fn local_mean3_stderr(z: &[f64]) -> f64 {
    let resid: Vec<f64> = z.windows(4).map(|w| w[3] - (w[0] + w[1] + w[2]) / 3.0).collect();
    stats::std_dev(&resid)
}
