use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::power::{baseband, baseband_dz, baseband_dzbar};
use super::{check_param_len, convolve, correlate_input, correlate_taps, flops, Block, Gradients};
use crate::error::{Error, Result};

/// Memory polynomial `y[n] = sum_p sum_m h_p[m] x[n-m] |x[n-m]|^(p-1)`.
///
/// Coefficients are stored flat with the order index outer and the delay
/// inner: `coefficients[i * memory + m]` is `h_{orders[i]}[m]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemoryPolynomialLayer {
    pub memory: usize,
    pub orders: Vec<usize>,
    pub coefficients: Vec<Complex64>,
    #[serde(skip)]
    cache: Option<Cache>,
}

#[derive(Debug, Clone, PartialEq)]
struct Cache {
    x: Vec<Complex64>,
    /// basis signals `x |x|^(p-1)`, one per order
    basis: Vec<Vec<Complex64>>,
}

impl MemoryPolynomialLayer {
    /// Layer over an explicit order set with all coefficients zero except
    /// `h_1[0] = 1` when order 1 is present.
    pub fn new(orders: Vec<usize>, memory: usize) -> Result<Self> {
        let mut coefficients = vec![Complex64::new(0.0, 0.0); orders.len() * memory];
        if let Some(i) = orders.iter().position(|&p| p == 1).filter(|_| memory > 0) {
            coefficients[i * memory] = Complex64::new(1.0, 0.0);
        }
        Self::with_coefficients(orders, memory, coefficients)
    }

    pub fn with_coefficients(
        orders: Vec<usize>,
        memory: usize,
        coefficients: Vec<Complex64>,
    ) -> Result<Self> {
        let layer = Self {
            memory,
            orders,
            coefficients,
            cache: None,
        };
        layer.validate()?;
        Ok(layer)
    }

    /// All orders `1..=max_order`.
    pub fn full(max_order: usize, memory: usize) -> Result<Self> {
        Self::new((1..=max_order).collect(), memory)
    }

    /// Odd orders `1, 3, ..., max_order`; `max_order` must be odd.
    pub fn odd(max_order: usize, memory: usize) -> Result<Self> {
        if max_order.is_multiple_of(2) {
            return Err(Error::EvenOrder(max_order));
        }
        Self::new((1..=max_order).step_by(2).collect(), memory)
    }

    pub fn validate(&self) -> Result<()> {
        if self.memory == 0 {
            return Err(Error::InvalidConfig("memory length must be >= 1".into()));
        }
        if self.orders.is_empty() || self.orders.contains(&0) {
            return Err(Error::InvalidConfig("orders must be non-empty and >= 1".into()));
        }
        if self.orders.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig("orders must be strictly increasing".into()));
        }
        if self.orders.iter().any(|&p| p > 63) {
            return Err(Error::InvalidConfig("orders above 63 are not supported".into()));
        }
        let expected = self.orders.len().checked_mul(self.memory).ok_or_else(|| {
            Error::InvalidConfig("order count times memory overflows".into())
        })?;
        check_param_len(expected, self.coefficients.len())
    }

    /// Taps `h_p[0..M]` of the given order.
    pub fn taps(&self, order: usize) -> Option<&[Complex64]> {
        let i = self.orders.iter().position(|&p| p == order)?;
        Some(&self.coefficients[i * self.memory..(i + 1) * self.memory])
    }

    pub fn taps_mut(&mut self, order: usize) -> Option<&mut [Complex64]> {
        let i = self.orders.iter().position(|&p| p == order)?;
        Some(&mut self.coefficients[i * self.memory..(i + 1) * self.memory])
    }

    fn basis(&self, x: &[Complex64]) -> Vec<Vec<Complex64>> {
        self.orders
            .iter()
            .map(|&p| x.iter().map(|&z| baseband(z, p)).collect())
            .collect()
    }

    fn combine(&self, basis: &[Vec<Complex64>], n: usize) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        for (i, u) in basis.iter().enumerate() {
            let h = &self.coefficients[i * self.memory..(i + 1) * self.memory];
            for (yn, v) in y.iter_mut().zip(convolve(h, u)) {
                *yn += v;
            }
        }
        y
    }
}

impl Block for MemoryPolynomialLayer {
    fn evaluate(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.combine(&self.basis(x), x.len())
    }

    fn forward(&mut self, x: &[Complex64]) -> Vec<Complex64> {
        let basis = self.basis(x);
        let y = self.combine(&basis, x.len());
        self.cache = Some(Cache {
            x: x.to_vec(),
            basis,
        });
        y
    }

    fn backward(&mut self, adjoint: &[Complex64]) -> Result<Gradients> {
        let cache = self.cache.as_ref().ok_or(Error::StaleCache)?;
        if cache.x.len() != adjoint.len() {
            return Err(Error::DimensionMismatch(format!(
                "adjoint of length {} for a forward pass of length {}",
                adjoint.len(),
                cache.x.len()
            )));
        }
        let m = self.memory;
        let mut params = Vec::with_capacity(self.coefficients.len());
        let mut input = vec![Complex64::new(0.0, 0.0); adjoint.len()];
        for (i, &p) in self.orders.iter().enumerate() {
            let h = &self.coefficients[i * m..(i + 1) * m];
            // dC/dconj(h_p[l]) = sum_n a[n] conj(u_p[n - l])
            params.extend(correlate_taps(adjoint, &cache.basis[i], m));
            // adjoint of the basis signal u_p, then through z |z|^(p-1)
            let au = correlate_input(adjoint, h);
            for ((acc, &z), a) in input.iter_mut().zip(&cache.x).zip(au) {
                *acc += a.conj() * baseband_dzbar(z, p) + a * baseband_dz(z, p);
            }
        }
        Ok(Gradients { input, params })
    }

    fn params(&self) -> Vec<Complex64> {
        self.coefficients.clone()
    }

    fn set_params(&mut self, params: &[Complex64]) -> Result<()> {
        check_param_len(self.coefficients.len(), params.len())?;
        self.coefficients.copy_from_slice(params);
        Ok(())
    }

    fn param_count(&self) -> usize {
        self.orders.len() * self.memory
    }

    fn flop_count(&self) -> u64 {
        flops::baseband_powers(&self.orders) + flops::dot_product(self.param_count())
    }

    fn memory(&self) -> usize {
        self.memory
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_term() {
        let mut l = MemoryPolynomialLayer::odd(3, 1).unwrap();
        l.set_params(&[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap();
        let y = l.evaluate(&[Complex64::new(2.0, 0.0)]);
        assert_eq!(y[0], Complex64::new(8.0, 0.0));
    }

    #[test]
    fn cubic_gradient_by_substitution() {
        // x = 2j, y - t = 1 -> dC/dconj(h3) = 1/2 (y - t) conj(x) |x|^2 = -4j
        let mut l = MemoryPolynomialLayer::odd(3, 1).unwrap();
        let x = [Complex64::new(0.0, 2.0)];
        l.forward(&x);
        let g = l.backward(&[Complex64::new(0.5, 0.0)]).unwrap();
        assert!((g.params[1] - Complex64::new(0.0, -4.0)).norm() < 1e-15);
    }

    #[test]
    fn counts() {
        assert_eq!(MemoryPolynomialLayer::odd(5, 13).unwrap().param_count(), 39);
        assert_eq!(MemoryPolynomialLayer::full(4, 2).unwrap().param_count(), 8);
        assert!(matches!(MemoryPolynomialLayer::odd(4, 2), Err(Error::EvenOrder(4))));
        assert!(MemoryPolynomialLayer::odd(3, 0).is_err());
    }
}
