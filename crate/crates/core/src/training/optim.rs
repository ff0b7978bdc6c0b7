use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::all_finite;

/// `params - lr * grads`, rejecting non-finite results.
pub fn gd_step(params: &[Complex64], grads: &[Complex64], lr: f64) -> Result<Vec<Complex64>> {
    if params.len() != grads.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} parameters, {} gradients",
            params.len(),
            grads.len()
        )));
    }
    let next: Vec<Complex64> = params.iter().zip(grads).map(|(p, g)| p - lr * g).collect();
    if !all_finite(&next) {
        return Err(Error::NonFinite("gradient step produced non-finite parameters".into()));
    }
    Ok(next)
}

/// Per-coordinate FTRL-Proximal state without L1/L2 regularisation.
///
/// Each complex parameter contributes two real coordinates (real part, then
/// imaginary part), with coordinate gradients `2 Re(g)` and `2 Im(g)` obtained
/// from the Wirtinger gradient `g = dC/d conj(theta)`.
///
/// The linear term starts at `z = -w0 * n0^(-power) / lr`, which keeps the
/// initial weights in place; the update then reads
/// `w <- w - lr * g / n^(-power)` with `n` the running sum of squared
/// gradients.
#[derive(Debug, Clone, PartialEq)]
pub struct FtrlState {
    pub learning_rate_power: f64,
    pub initial_accumulator: f64,
    /// accumulated squared gradients, one per real coordinate
    pub accum: Vec<f64>,
    /// linear term, one per real coordinate
    pub linear: Vec<f64>,
    initialised: bool,
}

impl FtrlState {
    pub fn new(param_count: usize, learning_rate_power: f64, initial_accumulator: f64) -> Self {
        Self {
            learning_rate_power,
            initial_accumulator,
            accum: vec![initial_accumulator; 2 * param_count],
            linear: vec![0.0; 2 * param_count],
            initialised: false,
        }
    }

    fn scale(&self, n: f64) -> f64 {
        n.powf(-self.learning_rate_power)
    }
}

fn split(params: &[Complex64]) -> Vec<f64> {
    params.iter().flat_map(|c| [c.re, c.im]).collect()
}

/// One FTRL-Proximal step; returns the new parameters.
pub fn ftrl_step(
    state: &mut FtrlState,
    params: &[Complex64],
    grads: &[Complex64],
    lr: f64,
) -> Result<Vec<Complex64>> {
    if params.len() != grads.len() || 2 * params.len() != state.accum.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} parameters, {} gradients, state for {}",
            params.len(),
            grads.len(),
            state.accum.len() / 2
        )));
    }
    if !(lr > 0.0) {
        return Err(Error::InvalidConfig(format!("learning rate must be positive, got {lr}")));
    }
    let w = split(params);
    if !state.initialised {
        for (z, (&wi, &n)) in state.linear.iter_mut().zip(w.iter().zip(&state.accum)) {
            *z = -wi * n.powf(-state.learning_rate_power) / lr;
        }
        state.initialised = true;
    }
    let g: Vec<f64> = grads.iter().flat_map(|c| [2.0 * c.re, 2.0 * c.im]).collect();
    let mut next = Vec::with_capacity(w.len());
    let mut accum = state.accum.clone();
    let mut linear = state.linear.clone();
    for i in 0..w.len() {
        // a zero gradient leaves the coordinate's state and weight untouched
        if g[i] == 0.0 {
            next.push(w[i]);
            continue;
        }
        let n_new = accum[i] + g[i] * g[i];
        let sigma = (state.scale(n_new) - state.scale(accum[i])) / lr;
        linear[i] += g[i] - sigma * w[i];
        accum[i] = n_new;
        next.push(-linear[i] * lr / state.scale(n_new));
    }
    if next.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("FTRL step produced non-finite parameters".into()));
    }
    state.accum = accum;
    state.linear = linear;
    Ok(next
        .chunks_exact(2)
        .map(|c| Complex64::new(c[0], c[1]))
        .collect())
}
