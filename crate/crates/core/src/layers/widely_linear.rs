use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_adjoint, check_param_len, flops, Block, Gradients};
use crate::error::{Error, Result};

/// Memoryless IQ-imbalance map `y[n] = K1 x[n] + K2 conj(x[n])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidelyLinearLayer {
    pub k1: Complex64,
    pub k2: Complex64,
    #[serde(skip)]
    cache: Option<Vec<Complex64>>,
}

impl WidelyLinearLayer {
    pub fn new(k1: Complex64, k2: Complex64) -> Self {
        Self { k1, k2, cache: None }
    }

    pub fn identity() -> Self {
        Self::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k1.is_finite() && self.k2.is_finite()) {
            return Err(Error::NonFinite("widely-linear gains".into()));
        }
        Ok(())
    }

    #[inline]
    pub fn apply(&self, x: Complex64) -> Complex64 {
        self.k1 * x + self.k2 * x.conj()
    }
}

impl Block for WidelyLinearLayer {
    fn evaluate(&self, x: &[Complex64]) -> Vec<Complex64> {
        x.iter().map(|&v| self.apply(v)).collect()
    }

    fn forward(&mut self, x: &[Complex64]) -> Vec<Complex64> {
        self.cache = Some(x.to_vec());
        self.evaluate(x)
    }

    fn backward(&mut self, adjoint: &[Complex64]) -> Result<Gradients> {
        check_adjoint(&self.cache, adjoint)?;
        let x = self.cache.as_ref().ok_or(Error::StaleCache)?;
        // dy/dx = K1, dy/dconj(x) = K2, dy/dconj(K1) = dy/dconj(K2) = 0
        let mut g1 = Complex64::new(0.0, 0.0);
        let mut g2 = Complex64::new(0.0, 0.0);
        let input = x
            .iter()
            .zip(adjoint)
            .map(|(xn, a)| {
                g1 += a * xn.conj();
                g2 += a * xn;
                a.conj() * self.k2 + a * self.k1.conj()
            })
            .collect();
        Ok(Gradients {
            input,
            params: vec![g1, g2],
        })
    }

    fn params(&self) -> Vec<Complex64> {
        vec![self.k1, self.k2]
    }

    fn set_params(&mut self, params: &[Complex64]) -> Result<()> {
        check_param_len(2, params.len())?;
        self.k1 = params[0];
        self.k2 = params[1];
        Ok(())
    }

    fn param_count(&self) -> usize {
        2
    }

    fn flop_count(&self) -> u64 {
        2 * flops::CMUL + flops::CADD
    }

    fn memory(&self) -> usize {
        1
    }
}
