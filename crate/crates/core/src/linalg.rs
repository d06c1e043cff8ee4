//! Least-squares helpers over nalgebra.

use nalgebra::{DMatrix, DVector};

/// Ridge penalty added to the normal equations when they are not
/// positive definite.
pub const RIDGE_FALLBACK: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct LeastSquares {
    /// One column of coefficients per target column.
    pub coefficients: DMatrix<f64>,
    /// `(X'X)^-1`, used for standard errors.
    pub gram_inverse: DMatrix<f64>,
    pub ridged: bool,
}

/// Solves `min ||X B - Y||` via the normal equations. Falls back to a ridge
/// penalty of [`RIDGE_FALLBACK`] when the Gram matrix is singular; `None`
/// if even that fails.
pub fn least_squares(design: &DMatrix<f64>, targets: &DMatrix<f64>) -> Option<LeastSquares> {
    let gram = design.transpose() * design;
    let rhs = design.transpose() * targets;
    if let Some(chol) = well_conditioned_cholesky(&gram) {
        return Some(LeastSquares {
            coefficients: chol.solve(&rhs),
            gram_inverse: chol.inverse(),
            ridged: false,
        });
    }
    let ridged = &gram + DMatrix::identity(gram.nrows(), gram.ncols()) * RIDGE_FALLBACK;
    let chol = ridged.cholesky()?;
    let coefficients = chol.solve(&rhs);
    if coefficients.iter().any(|c| !c.is_finite()) {
        return None;
    }
    Some(LeastSquares { coefficients, gram_inverse: chol.inverse(), ridged: true })
}

fn well_conditioned_cholesky(gram: &DMatrix<f64>) -> Option<nalgebra::Cholesky<f64, nalgebra::Dyn>> {
    let chol = gram.clone().cholesky()?;
    // reject near-singular factors: a tiny pivot relative to the largest
    // diagonal entry means a (numerically) rank-deficient design
    let l = chol.l();
    let max_diag = gram.diagonal().iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let min_pivot = l.diagonal().iter().fold(f64::INFINITY, |a, &b| a.min(b * b));
    if max_diag == 0.0 || min_pivot <= max_diag * 1e-12 {
        return None;
    }
    Some(chol)
}

pub fn ols_vector(design: &DMatrix<f64>, target: &DVector<f64>) -> Option<LeastSquares> {
    let y = DMatrix::from_column_slice(target.len(), 1, target.as_slice());
    least_squares(design, &y)
}
