use num_complex::Complex64;

use crate::error::{Error, Result};

/// Weights and step size of a complex LMS filter.
#[derive(Debug, Clone, PartialEq)]
pub struct LmsState {
    pub weights: Vec<Complex64>,
    pub step_size: f64,
}

impl LmsState {
    pub fn new(weights: Vec<Complex64>, step_size: f64) -> Self {
        Self { weights, step_size }
    }

    /// One update `w <- w - lambda * 1/2 (y - t) conj(b)` with `y = w^T b`.
    /// Returns the prediction made before the update. On a non-finite update
    /// the weights are left untouched.
    pub fn step(&mut self, basis_row: &[Complex64], target: Complex64) -> Result<Complex64> {
        if basis_row.len() != self.weights.len() {
            return Err(Error::DimensionMismatch(format!(
                "basis row of length {} for {} weights",
                basis_row.len(),
                self.weights.len()
            )));
        }
        let y: Complex64 = self.weights.iter().zip(basis_row).map(|(w, b)| w * b).sum();
        let err = 0.5 * (y - target);
        let next: Vec<Complex64> = self
            .weights
            .iter()
            .zip(basis_row)
            .map(|(w, b)| w - self.step_size * err * b.conj())
            .collect();
        if !crate::numerics::all_finite(&next) {
            return Err(Error::NonFinite("LMS update diverged".into()));
        }
        self.weights = next;
        Ok(y)
    }
}

/// Functional form of [`LmsState::step`].
pub fn lms_step(state: &LmsState, basis_row: &[Complex64], target: Complex64) -> Result<LmsState> {
    let mut next = state.clone();
    next.step(basis_row, target)?;
    Ok(next)
}
