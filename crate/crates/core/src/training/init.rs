use num_complex::Complex64;

use super::InitScheme;
use crate::error::Result;
use crate::layers::{Block, Cascade, Layer};
use crate::numerics::{complex_gaussian, RngStream};

/// Spread of the initial IQ gains around `K1 = 1`, `K2 = 0`.
const K1_SPREAD: f64 = 0.05;
const K2_SPREAD: f64 = 0.01;

/// Randomises the trainable parameters of `model`.
///
/// Filter-type taps are drawn with variance `1 / fan_in`, where `fan_in` is the
/// number of taps feeding one output; the IQ gains start near the dominant
/// path `K1 = 1`, `K2 = 0`. If the last trainable layer is linear in its
/// parameters, its taps are then rescaled so that the model output over
/// `train_input` has unit power (1/2 per quadrature).
pub fn init_cascade(
    model: &mut Cascade,
    train_input: &[Complex64],
    rng: &mut RngStream,
    scheme: InitScheme,
) -> Result<()> {
    if scheme == InitScheme::Explicit {
        return Ok(());
    }
    for layer in &mut model.layers {
        match layer {
            Layer::WidelyLinear(l) => {
                let d = complex_gaussian(rng, 2, 1.0);
                l.k1 = Complex64::new(1.0, 0.0) + K1_SPREAD * d[0];
                l.k2 = K2_SPREAD * d[1];
            }
            Layer::Fir(l) => {
                let n = l.taps.len();
                l.taps = complex_gaussian(rng, n, 1.0 / n as f64);
            }
            Layer::MemoryPolynomial(l) => {
                let n = l.coefficients.len();
                l.coefficients = complex_gaussian(rng, n, 1.0 / n as f64);
            }
            Layer::StaticPower(_) => {}
        }
    }
    let Some(last) = model.layers.len().checked_sub(1) else {
        return Ok(());
    };
    let last_linear = matches!(model.layers[last], Layer::Fir(_) | Layer::MemoryPolynomial(_))
        .then_some(last);
    if let Some(i) = last_linear {
        let y = model.evaluate(train_input);
        if !y.is_empty() {
            let mean = y.iter().sum::<Complex64>() / y.len() as f64;
            let var = y.iter().map(|z| (z - mean).norm_sqr()).sum::<f64>() / y.len() as f64;
            if var > 0.0 && var.is_finite() {
                let s = 1.0 / var.sqrt();
                let p: Vec<Complex64> = model.layers[i].params().iter().map(|c| c * s).collect();
                model.layers[i].set_params(&p)?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_unit_power() {
        let x = complex_gaussian(&mut RngStream::new(1, 9), 4000, 1.0);
        let mut a = Cascade::iq_pa(5, 13).unwrap();
        let mut b = Cascade::iq_pa(5, 13).unwrap();
        init_cascade(&mut a, &x, &mut RngStream::new(3, 1), InitScheme::VariancePreserving).unwrap();
        init_cascade(&mut b, &x, &mut RngStream::new(3, 1), InitScheme::VariancePreserving).unwrap();
        assert_eq!(a.params(), b.params());
        let y = a.evaluate(&x);
        let power = y.iter().map(|z| z.norm_sqr()).sum::<f64>() / y.len() as f64;
        assert!((power - 1.0).abs() < 0.05, "power {power}");
    }

    #[test]
    fn explicit_keeps_parameters() {
        let mut a = Cascade::iq_pa(3, 2).unwrap();
        let before = a.params();
        init_cascade(&mut a, &[], &mut RngStream::new(0, 0), InitScheme::Explicit).unwrap();
        assert_eq!(a.params(), before);
    }
}
