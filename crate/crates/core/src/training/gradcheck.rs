use num_complex::Complex64;

use super::{cost_adjoint, mse_cost};
use crate::error::{Error, Result};
use crate::layers::Block;
use crate::numerics::wirtinger_finite_difference;

/// Analytic and finite-difference gradients of the batch MSE side by side.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientComparison {
    pub analytic: Vec<Complex64>,
    pub numeric: Vec<Complex64>,
}

impl GradientComparison {
    /// `max |analytic - numeric| / max |numeric|`, the largest deviation
    /// relative to the gradient's scale. Exactly-zero gradients compare by
    /// absolute error.
    pub fn max_relative_error(&self) -> f64 {
        let scale = self.numeric.iter().map(|g| g.norm()).fold(0.0, f64::max);
        let worst = self
            .analytic
            .iter()
            .zip(&self.numeric)
            .map(|(a, n)| (a - n).norm())
            .fold(0.0, f64::max);
        if scale > 0.0 {
            worst / scale
        } else {
            worst
        }
    }
}

fn check_lengths(x: &[Complex64], t: &[Complex64]) -> Result<()> {
    if x.len() != t.len() {
        return Err(Error::DimensionMismatch(format!(
            "input has {} samples, target {}",
            x.len(),
            t.len()
        )));
    }
    Ok(())
}

fn analytic<B: Block + Clone>(model: &B, x: &[Complex64], t: &[Complex64]) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    check_lengths(x, t)?;
    let mut m = model.clone();
    let y = m.forward(x);
    let g = m.backward(&cost_adjoint(&y, t)?)?;
    Ok((g.params, g.input))
}

fn cost_at<B: Block + Clone>(model: &B, x: &[Complex64], t: &[Complex64]) -> f64 {
    mse_cost(&model.evaluate(x), t).unwrap_or(f64::NAN)
}

/// Gradient of `mse_cost(model(x), t)` with respect to every parameter.
pub fn compare_param_gradients<B: Block + Clone>(
    model: &B,
    x: &[Complex64],
    t: &[Complex64],
    step: f64,
) -> Result<GradientComparison> {
    let (params, _) = analytic(model, x, t)?;
    let mut probe = model.clone();
    let numeric = wirtinger_finite_difference(
        |p| match probe.set_params(p) {
            Ok(()) => cost_at(&probe, x, t),
            Err(_) => f64::NAN,
        },
        &model.params(),
        step,
    )?;
    Ok(GradientComparison {
        analytic: params,
        numeric,
    })
}

/// Gradient of `mse_cost(model(x), t)` with respect to every input sample.
pub fn compare_input_gradients<B: Block + Clone>(
    model: &B,
    x: &[Complex64],
    t: &[Complex64],
    step: f64,
) -> Result<GradientComparison> {
    let (_, input) = analytic(model, x, t)?;
    let numeric = wirtinger_finite_difference(|xs| cost_at(model, xs, t), x, step)?;
    Ok(GradientComparison {
        analytic: input,
        numeric,
    })
}
