use super::ForecastError;

pub(super) fn naive(history: &[&[f64]], horizon: usize) -> Vec<Vec<f64>> {
    history.iter().map(|c| vec![c[c.len() - 1]; horizon]).collect()
}

/// Step `k` copies the value one (or more) whole cycles back.
pub(super) fn seasonal_naive(
    history: &[&[f64]],
    period: usize,
    horizon: usize,
) -> Result<Vec<Vec<f64>>, ForecastError> {
    let len = history[0].len();
    if len < period {
        return Err(ForecastError::InsufficientData(format!(
            "seasonal_naive needs {period} points of history, got {len}"
        )));
    }
    Ok(history
        .iter()
        .map(|c| (0..horizon).map(|k| c[len - period + k % period]).collect())
        .collect())
}
