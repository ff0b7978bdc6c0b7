use num_complex::Complex64;

use crate::error::{Error, Result};

fn check(y: &[Complex64], t: &[Complex64]) -> Result<()> {
    if y.len() != t.len() {
        return Err(Error::DimensionMismatch(format!(
            "output has {} samples, target {}",
            y.len(),
            t.len()
        )));
    }
    if y.is_empty() {
        return Err(Error::EmptySignal);
    }
    Ok(())
}

/// Mean over samples of `1/2 (t - y) conj(t - y)`.
pub fn mse_cost(y: &[Complex64], t: &[Complex64]) -> Result<f64> {
    check(y, t)?;
    let sum: f64 = y.iter().zip(t).map(|(a, b)| 0.5 * (b - a).norm_sqr()).sum();
    Ok(sum / y.len() as f64)
}

/// `dC/d conj(y[n]) = 1/2 (y[n] - t[n]) / N` for the mean cost.
pub fn cost_adjoint(y: &[Complex64], t: &[Complex64]) -> Result<Vec<Complex64>> {
    check(y, t)?;
    let scale = 0.5 / y.len() as f64;
    Ok(y.iter().zip(t).map(|(a, b)| scale * (a - b)).collect())
}
