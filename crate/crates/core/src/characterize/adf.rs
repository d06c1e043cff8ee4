//! Augmented Dickey-Fuller unit-root test with a constant term.
//!
//! Regression: `dy_t = a + g*y_{t-1} + sum_{i=1..p} b_i*dy_{t-i} + e_t` with
//! `p = floor(12 * (T/100)^0.25)`. The p-value of the t-statistic on `g`
//! comes from MacKinnon's (1994) response surface for one variable.

use nalgebra::{DMatrix, DVector};
use statrs::distribution::{ContinuousCDF, Normal};

use super::CharError;
use crate::{linalg, stats};

pub const MIN_LEN: usize = 20;
pub const SIGNIFICANCE: f64 = 0.05;

const TAU_MAX: f64 = 2.74;
const TAU_MIN: f64 = -18.83;
const TAU_STAR: f64 = -1.61;
const TAU_SMALL_P: [f64; 3] = [2.1659, 1.4412, 3.8269e-2];
const TAU_LARGE_P: [f64; 4] = [1.7339, 9.3202e-1, -1.2745e-1, -1.0368e-2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdfResult {
    pub statistic: f64,
    pub pvalue: f64,
    pub lags: usize,
    pub nobs: usize,
}

/// Schwert's rule, limited so the regression keeps positive degrees of freedom.
pub fn schwert_lags(len: usize) -> usize {
    let p = (12.0 * (len as f64 / 100.0).powf(0.25)).floor() as usize;
    p.min((len / 2).saturating_sub(2))
}

pub fn mackinnon_pvalue(stat: f64) -> f64 {
    if stat > TAU_MAX {
        return 1.0;
    }
    if stat < TAU_MIN {
        return 0.0;
    }
    let z = if stat <= TAU_STAR {
        poly(&TAU_SMALL_P, stat)
    } else {
        poly(&TAU_LARGE_P, stat)
    };
    Normal::new(0.0, 1.0).expect("standard normal").cdf(z)
}

fn poly(coef: &[f64], x: f64) -> f64 {
    coef.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

pub fn adf_test(x: &[f64]) -> Result<AdfResult, CharError> {
    adf_test_with_lags(x, schwert_lags(x.len()))
}

/// ADF regression with an explicit number of lagged differences.
pub fn adf_test_with_lags(x: &[f64], p: usize) -> Result<AdfResult, CharError> {
    let n = x.len();
    if n < MIN_LEN {
        return Err(CharError::TooShort { needed: MIN_LEN, actual: n });
    }
    if stats::is_constant(x) {
        return Err(CharError::DegenerateVariance);
    }
    if p + 3 >= n {
        return Err(CharError::InvalidArgument(format!("{p} lags leave no degrees of freedom for {n} points")));
    }
    let dy: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let nobs = dy.len() - p;
    let k = p + 2;
    let mut design = DMatrix::zeros(nobs, k);
    let mut target = DVector::zeros(nobs);
    for r in 0..nobs {
        let t = r + p; // index into dy
        target[r] = dy[t];
        design[(r, 0)] = x[t];
        for i in 1..=p {
            design[(r, i)] = dy[t - i];
        }
        design[(r, p + 1)] = 1.0;
    }
    let fit = linalg::ols_vector(&design, &target).ok_or(CharError::SingularRegression)?;
    if fit.ridged {
        return Err(CharError::SingularRegression);
    }
    let coef = fit.coefficients.column(0);
    let resid = &target - &design * coef;
    let dof = nobs as f64 - k as f64;
    if dof <= 0.0 {
        return Err(CharError::TooShort { needed: n + 1, actual: n });
    }
    let s2 = resid.dot(&resid) / dof;
    let se = (s2 * fit.gram_inverse[(0, 0)]).sqrt();
    if se == 0.0 || !se.is_finite() {
        return Err(CharError::SingularRegression);
    }
    let statistic = coef[0] / se;
    Ok(AdfResult { statistic, pvalue: mackinnon_pvalue(statistic), lags: p, nobs })
}

pub fn adf_pvalue(x: &[f64]) -> Result<f64, CharError> {
    adf_test(x).map(|r| r.pvalue)
}

pub fn is_stationary_pvalue(p: f64) -> bool {
    p <= SIGNIFICANCE
}

/// True iff the ADF p-value is at most 0.05.
pub fn stationarity(x: &[f64]) -> Result<bool, CharError> {
    adf_pvalue(x).map(is_stationary_pvalue)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schwert_rule() {
        assert_eq!(schwert_lags(100), 12);
        assert_eq!(schwert_lags(500), 17);
        assert_eq!(schwert_lags(20), 8);
    }

    #[test]
    fn mackinnon_reference_points() {
        // frozen from statsmodels.tsa.adfvalues.mackinnonp(stat, "c", 1)
        assert!((mackinnon_pvalue(-2.0) - 0.28657309916843154).abs() < 1e-12);
        assert_eq!(mackinnon_pvalue(3.0), 1.0);
        assert_eq!(mackinnon_pvalue(-20.0), 0.0);
    }

    #[test]
    fn boundary_is_inclusive() {
        assert!(is_stationary_pvalue(0.05));
        assert!(!is_stationary_pvalue(0.050000001));
    }

    #[test]
    fn constant_and_short() {
        assert_eq!(adf_pvalue(&[1.0; 50]), Err(CharError::DegenerateVariance));
        assert!(matches!(adf_pvalue(&[1.0, 2.0, 3.0]), Err(CharError::TooShort { .. })));
    }
}
