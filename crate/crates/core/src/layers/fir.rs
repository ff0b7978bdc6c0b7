use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_adjoint, check_param_len, convolve, correlate_input, correlate_taps, flops};
use super::{Block, Gradients};
use crate::error::{Error, Result};

/// Linear time-invariant filter `y[n] = sum_m h[m] x[n - m]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FirFilterLayer {
    pub taps: Vec<Complex64>,
    #[serde(skip)]
    cache: Option<Vec<Complex64>>,
}

impl FirFilterLayer {
    pub fn new(taps: Vec<Complex64>) -> Result<Self> {
        let layer = Self { taps, cache: None };
        layer.validate()?;
        Ok(layer)
    }

    /// Unit impulse of length `memory`.
    pub fn identity(memory: usize) -> Result<Self> {
        let mut taps = vec![Complex64::new(0.0, 0.0); memory];
        if let Some(t) = taps.first_mut() {
            *t = Complex64::new(1.0, 0.0);
        }
        Self::new(taps)
    }

    pub fn validate(&self) -> Result<()> {
        if self.taps.is_empty() {
            return Err(Error::InvalidConfig("FIR filter needs at least one tap".into()));
        }
        Ok(())
    }
}

impl Block for FirFilterLayer {
    fn evaluate(&self, x: &[Complex64]) -> Vec<Complex64> {
        convolve(&self.taps, x)
    }

    fn forward(&mut self, x: &[Complex64]) -> Vec<Complex64> {
        self.cache = Some(x.to_vec());
        self.evaluate(x)
    }

    fn backward(&mut self, adjoint: &[Complex64]) -> Result<Gradients> {
        check_adjoint(&self.cache, adjoint)?;
        let x = self.cache.as_ref().ok_or(Error::StaleCache)?;
        Ok(Gradients {
            params: correlate_taps(adjoint, x, self.taps.len()),
            input: correlate_input(adjoint, &self.taps),
        })
    }

    fn params(&self) -> Vec<Complex64> {
        self.taps.clone()
    }

    fn set_params(&mut self, params: &[Complex64]) -> Result<()> {
        check_param_len(self.taps.len(), params.len())?;
        self.taps.copy_from_slice(params);
        Ok(())
    }

    fn param_count(&self) -> usize {
        self.taps.len()
    }

    fn flop_count(&self) -> u64 {
        flops::dot_product(self.taps.len())
    }

    fn memory(&self) -> usize {
        self.taps.len()
    }
}
