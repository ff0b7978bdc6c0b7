use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_adjoint, flops, Block, Gradients};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerMode {
    /// `z^p`
    RawPower,
    /// `z |z|^(p-1)`
    Baseband,
}

/// Static (memoryless, non-trainable) power non-linearity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StaticPowerLayer {
    pub exponent: usize,
    pub mode: PowerMode,
    #[serde(skip)]
    cache: Option<Vec<Complex64>>,
}

/// `|z|^e`, computed from `|z|^2` when `e` is even.
#[inline]
pub(crate) fn abs_pow(z: Complex64, e: usize) -> f64 {
    if e.is_multiple_of(2) {
        z.norm_sqr().powi((e / 2) as i32)
    } else {
        z.norm().powi(e as i32)
    }
}

/// `z |z|^(p-1)`.
#[inline]
pub(crate) fn baseband(z: Complex64, p: usize) -> Complex64 {
    if p == 1 {
        z
    } else {
        z * abs_pow(z, p - 1)
    }
}

/// `d/dz [z |z|^(p-1)] = (p+1)/2 |z|^(p-1)`, real-valued.
#[inline]
pub(crate) fn baseband_dz(z: Complex64, p: usize) -> f64 {
    if p == 1 {
        1.0
    } else {
        0.5 * (p as f64 + 1.0) * abs_pow(z, p - 1)
    }
}

/// `d/dconj(z) [z |z|^(p-1)] = (p-1)/2 z^2 |z|^(p-3)`.
///
/// Written without the `z / conj(z)` ratio so it stays finite at `z = 0`;
/// for `p = 2` the limit at zero is taken as 0.
#[inline]
pub(crate) fn baseband_dzbar(z: Complex64, p: usize) -> Complex64 {
    match p {
        1 => Complex64::new(0.0, 0.0),
        2 => {
            let r = z.norm();
            if r == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                0.5 * z * z / r
            }
        }
        _ => 0.5 * (p as f64 - 1.0) * z * z * abs_pow(z, p - 3),
    }
}

impl StaticPowerLayer {
    pub fn new(exponent: usize, mode: PowerMode) -> Result<Self> {
        let layer = Self {
            exponent,
            mode,
            cache: None,
        };
        layer.validate()?;
        Ok(layer)
    }

    pub fn validate(&self) -> Result<()> {
        if self.exponent == 0 {
            return Err(Error::InvalidConfig("power exponent must be >= 1".into()));
        }
        Ok(())
    }

    #[inline]
    fn apply(&self, z: Complex64) -> Complex64 {
        match self.mode {
            PowerMode::RawPower => z.powu(self.exponent as u32),
            PowerMode::Baseband => baseband(z, self.exponent),
        }
    }
}

impl Block for StaticPowerLayer {
    fn evaluate(&self, x: &[Complex64]) -> Vec<Complex64> {
        x.iter().map(|&z| self.apply(z)).collect()
    }

    fn forward(&mut self, x: &[Complex64]) -> Vec<Complex64> {
        self.cache = Some(x.to_vec());
        self.evaluate(x)
    }

    fn backward(&mut self, adjoint: &[Complex64]) -> Result<Gradients> {
        check_adjoint(&self.cache, adjoint)?;
        let x = self.cache.as_ref().ok_or(Error::StaleCache)?;
        let p = self.exponent;
        let input = x
            .iter()
            .zip(adjoint)
            .map(|(&z, &a)| match self.mode {
                // holomorphic: dC/dconj(z) = a * conj(p z^(p-1))
                PowerMode::RawPower => {
                    let dz = p as f64 * z.powu(p as u32 - 1);
                    a * dz.conj()
                }
                PowerMode::Baseband => a.conj() * baseband_dzbar(z, p) + a * baseband_dz(z, p),
            })
            .collect();
        Ok(Gradients {
            input,
            params: Vec::new(),
        })
    }

    fn params(&self) -> Vec<Complex64> {
        Vec::new()
    }

    fn set_params(&mut self, params: &[Complex64]) -> Result<()> {
        super::check_param_len(0, params.len())
    }

    fn param_count(&self) -> usize {
        0
    }

    fn flop_count(&self) -> u64 {
        match self.mode {
            PowerMode::RawPower => flops::raw_power(self.exponent),
            PowerMode::Baseband => flops::baseband_powers(&[self.exponent]),
        }
    }

    fn memory(&self) -> usize {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes() {
        let z = Complex64::new(0.0, 2.0);
        let raw = StaticPowerLayer::new(3, PowerMode::RawPower).unwrap();
        let bb = StaticPowerLayer::new(3, PowerMode::Baseband).unwrap();
        assert_eq!(raw.evaluate(&[z])[0], Complex64::new(0.0, -8.0));
        assert_eq!(bb.evaluate(&[z])[0], Complex64::new(0.0, 8.0));
        assert_eq!(raw.param_count(), 0);
    }

    #[test]
    fn zero_input_is_finite() {
        let z = Complex64::new(0.0, 0.0);
        for p in 1..=9 {
            assert!(baseband_dzbar(z, p).is_finite());
            assert!(baseband_dz(z, p).is_finite());
        }
    }

    #[test]
    fn rejects_zero_exponent() {
        assert!(StaticPowerLayer::new(0, PowerMode::Baseband).is_err());
    }
}
