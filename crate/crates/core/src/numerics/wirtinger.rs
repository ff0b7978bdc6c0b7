use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default central-difference step for unit-scale inputs.
pub const DEFAULT_FD_STEP: f64 = 1e-6;

/// Central-difference estimate of `df/d conj(z)` for each coordinate of `p`.
///
/// Uses `df/d conj(z) = (df/dRe(z) + j df/dIm(z)) / 2`, which holds for any
/// real-valued `f`.
pub fn wirtinger_finite_difference<F>(mut f: F, p: &[Complex64], step: f64) -> Result<Vec<Complex64>>
where
    F: FnMut(&[Complex64]) -> f64,
{
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidConfig(format!("step must be positive, got {step}")));
    }
    let mut probe = p.to_vec();
    let mut eval = |probe: &[Complex64]| -> Result<f64> {
        let v = f(probe);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite(format!("function value {v}")))
        }
    };
    let mut grad = Vec::with_capacity(p.len());
    for i in 0..p.len() {
        let base = probe[i];
        probe[i] = base + Complex64::new(step, 0.0);
        let re_plus = eval(&probe)?;
        probe[i] = base - Complex64::new(step, 0.0);
        let re_minus = eval(&probe)?;
        probe[i] = base + Complex64::new(0.0, step);
        let im_plus = eval(&probe)?;
        probe[i] = base - Complex64::new(0.0, step);
        let im_minus = eval(&probe)?;
        probe[i] = base;
        let d_re = (re_plus - re_minus) / (2.0 * step);
        let d_im = (im_plus - im_minus) / (2.0 * step);
        grad.push(Complex64::new(0.5 * d_re, 0.5 * d_im));
    }
    Ok(grad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squared_magnitude() {
        let g = wirtinger_finite_difference(|z| z[0].norm_sqr(), &[Complex64::new(1.0, 1.0)], 1e-6)
            .unwrap();
        assert!((g[0] - Complex64::new(1.0, 1.0)).norm() < 1e-8);
    }

    #[test]
    fn real_part() {
        let g = wirtinger_finite_difference(|z| z[0].re, &[Complex64::new(3.0, 0.0)], 1e-6).unwrap();
        assert!((g[0] - Complex64::new(0.5, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn quartic_closed_form() {
        // f = |z|^4 = (z conj z)^2  =>  df/d conj(z) = 2 z |z|^2
        let z = Complex64::new(0.7, -0.4);
        let g = wirtinger_finite_difference(|p| p[0].norm_sqr().powi(2), &[z], 1e-6).unwrap();
        let exact = 2.0 * z * z.norm_sqr();
        assert!((g[0] - exact).norm() / exact.norm() < 1e-5);
    }

    #[test]
    fn non_finite_is_reported() {
        let r = wirtinger_finite_difference(|_| f64::NAN, &[Complex64::new(0.0, 0.0)], 1e-6);
        assert!(matches!(r, Err(Error::NonFinite(_))));
    }

    #[test]
    fn rejects_bad_step() {
        assert!(wirtinger_finite_difference(|_| 0.0, &[Complex64::new(0.0, 0.0)], 0.0).is_err());
    }
}
