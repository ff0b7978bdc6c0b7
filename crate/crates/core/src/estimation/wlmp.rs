use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layers::{check_param_len, convolve, correlate_input, correlate_taps, flops};
use crate::layers::{Block, Gradients};
use crate::numerics::{solve_least_squares, DesignMatrix};

/// `M (P+1) (P+3) / 4` for odd `P`.
pub fn wlmp_coefficient_count(max_order: usize, memory: usize) -> usize {
    memory * (max_order + 1) * (max_order + 3) / 4
}

/// `y[n] = sum_{p odd} sum_{q=0..=p} sum_m g_{p,q}[m] x[n-m]^q conj(x[n-m])^(p-q)`.
///
/// Coefficients are ordered with `p` ascending, then `q` ascending, then `m`
/// ascending; the same order as the columns of [`build_wlmp_basis`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WlmpModel {
    pub max_order: usize,
    pub memory: usize,
    pub coefficients: Vec<Complex64>,
    #[serde(skip)]
    cache: Option<Vec<Complex64>>,
}

/// `(p, q)` pairs in column order.
fn order_pairs(max_order: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=max_order)
        .step_by(2)
        .flat_map(|p| (0..=p).map(move |q| (p, q)))
}

#[inline]
fn monomial(z: Complex64, p: usize, q: usize) -> Complex64 {
    z.powu(q as u32) * z.conj().powu((p - q) as u32)
}

fn check_order(max_order: usize) -> Result<()> {
    if max_order == 0 || max_order.is_multiple_of(2) {
        return Err(Error::EvenOrder(max_order));
    }
    if max_order > 63 {
        return Err(Error::InvalidConfig("orders above 63 are not supported".into()));
    }
    Ok(())
}

impl WlmpModel {
    pub fn zeros(max_order: usize, memory: usize) -> Result<Self> {
        check_order(max_order)?;
        let k = wlmp_coefficient_count(max_order, memory);
        Self::with_coefficients(max_order, memory, vec![Complex64::new(0.0, 0.0); k])
    }

    pub fn with_coefficients(
        max_order: usize,
        memory: usize,
        coefficients: Vec<Complex64>,
    ) -> Result<Self> {
        let m = Self {
            max_order,
            memory,
            coefficients,
            cache: None,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        check_order(self.max_order)?;
        if self.memory == 0 {
            return Err(Error::InvalidConfig("memory length must be >= 1".into()));
        }
        let k = self
            .memory
            .checked_mul((self.max_order + 1) * (self.max_order + 3))
            .ok_or_else(|| Error::InvalidConfig("coefficient count overflows".into()))?
            / 4;
        check_param_len(k, self.coefficients.len())
    }

    /// Taps `g_{p,q}[0..M]`.
    pub fn taps(&self, p: usize, q: usize) -> Option<&[Complex64]> {
        let i = order_pairs(self.max_order).position(|pq| pq == (p, q))?;
        Some(&self.coefficients[i * self.memory..(i + 1) * self.memory])
    }

    fn monomials(&self, x: &[Complex64]) -> Vec<Vec<Complex64>> {
        order_pairs(self.max_order)
            .map(|(p, q)| x.iter().map(|&z| monomial(z, p, q)).collect())
            .collect()
    }
}

impl Block for WlmpModel {
    fn evaluate(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); x.len()];
        for (i, b) in self.monomials(x).iter().enumerate() {
            let g = &self.coefficients[i * self.memory..(i + 1) * self.memory];
            for (acc, v) in y.iter_mut().zip(convolve(g, b)) {
                *acc += v;
            }
        }
        y
    }

    fn forward(&mut self, x: &[Complex64]) -> Vec<Complex64> {
        self.cache = Some(x.to_vec());
        self.evaluate(x)
    }

    fn backward(&mut self, adjoint: &[Complex64]) -> Result<Gradients> {
        crate::layers::check_adjoint(&self.cache, adjoint)?;
        let x = self.cache.as_ref().ok_or(Error::StaleCache)?;
        let m = self.memory;
        let mut params = Vec::with_capacity(self.coefficients.len());
        let mut input = vec![Complex64::new(0.0, 0.0); x.len()];
        for (i, (p, q)) in order_pairs(self.max_order).enumerate() {
            let b: Vec<Complex64> = x.iter().map(|&z| monomial(z, p, q)).collect();
            params.extend(correlate_taps(adjoint, &b, m));
            let ab = correlate_input(adjoint, &self.coefficients[i * m..(i + 1) * m]);
            for ((acc, &z), a) in input.iter_mut().zip(x).zip(ab) {
                // d/dz = q z^(q-1) conj(z)^(p-q), d/dconj(z) = (p-q) z^q conj(z)^(p-q-1)
                let dz = if q == 0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    q as f64 * z.powu(q as u32 - 1) * z.conj().powu((p - q) as u32)
                };
                let dzbar = if q == p {
                    Complex64::new(0.0, 0.0)
                } else {
                    (p - q) as f64 * z.powu(q as u32) * z.conj().powu((p - q - 1) as u32)
                };
                *acc += a.conj() * dzbar + a * dz.conj();
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
        self.coefficients.len()
    }

    fn flop_count(&self) -> u64 {
        flops::wlmp_monomials(self.max_order) * self.memory as u64
            + flops::dot_product(self.param_count())
    }

    fn memory(&self) -> usize {
        self.memory
    }

    fn kind(&self) -> &'static str {
        "wlmp"
    }
}

/// One row per sample, one column per `(p, q, m)` in coefficient order.
pub fn build_wlmp_basis(x: &[Complex64], max_order: usize, memory: usize) -> Result<DesignMatrix> {
    check_order(max_order)?;
    if memory == 0 {
        return Err(Error::InvalidConfig("memory length must be >= 1".into()));
    }
    let pairs: Vec<(usize, usize)> = order_pairs(max_order).collect();
    let k = pairs.len() * memory;
    let mut mat = DesignMatrix::zeros(x.len(), k);
    for n in 0..x.len() {
        let row = mat.row_mut(n);
        for m in 0..memory.min(n + 1) {
            let z = x[n - m];
            for (i, &(p, q)) in pairs.iter().enumerate() {
                row[i * memory + m] = monomial(z, p, q);
            }
        }
    }
    Ok(mat)
}

/// Least-squares WLMP fit of `t` from `x`.
pub fn fit_wlmp(x: &[Complex64], t: &[Complex64], max_order: usize, memory: usize) -> Result<WlmpModel> {
    if x.len() != t.len() {
        return Err(Error::DimensionMismatch(format!(
            "input has {} samples, target {}",
            x.len(),
            t.len()
        )));
    }
    let basis = build_wlmp_basis(x, max_order, memory)?;
    let g = solve_least_squares(&basis, t)?;
    WlmpModel::with_coefficients(max_order, memory, g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn column_counts() {
        let x = vec![Complex64::new(0.5, 0.1); 4];
        assert_eq!(build_wlmp_basis(&x, 1, 1).unwrap().cols(), 2);
        assert_eq!(build_wlmp_basis(&x, 3, 1).unwrap().cols(), 6);
        assert_eq!(wlmp_coefficient_count(5, 13), 156);
        assert!(matches!(build_wlmp_basis(&x, 4, 1), Err(Error::EvenOrder(4))));
    }

    #[test]
    fn first_order_columns() {
        let z = Complex64::new(0.3, -0.7);
        let b = build_wlmp_basis(&[z], 1, 1).unwrap();
        // (p, q) = (1, 0) then (1, 1)
        assert_eq!(b.row(0), &[z.conj(), z]);
    }

    #[test]
    fn zero_target_gives_zero_coefficients() {
        let x: Vec<_> = (0..40)
            .map(|k| Complex64::from_polar(1.0 + 0.1 * k as f64, 0.7 * k as f64))
            .collect();
        let g = fit_wlmp(&x, &vec![Complex64::new(0.0, 0.0); 40], 3, 2).unwrap();
        assert!(g.coefficients.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn flop_count_in_direct_form() {
        let m = WlmpModel::zeros(5, 13).unwrap();
        assert_eq!(m.flop_count(), 28 * 13 + 156 * 6 + 155 * 2);
    }
}
