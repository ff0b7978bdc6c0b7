use num_complex::Complex64;

use super::WlmpModel;
use crate::error::{Error, Result};
use crate::layers::MemoryPolynomialLayer;

/// Exact `C(n, k)` in integer arithmetic.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc * (n - i) is divisible by (i + 1)
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Coefficients `c_q` with `(K1 x + K2 conj x)^a (conj(K1) conj(x) + conj(K2) x)^b
/// = sum_q c_q x^q conj(x)^(a+b-q)`.
fn expansion(k1: Complex64, k2: Complex64, a: usize, b: usize) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(0.0, 0.0); a + b + 1];
    for i in 0..=a {
        let left = binomial(a as u64, i as u64) as f64 * k1.powu(i as u32) * k2.powu((a - i) as u32);
        for j in 0..=b {
            let right = binomial(b as u64, j as u64) as f64
                * k2.conj().powu(j as u32)
                * k1.conj().powu((b - j) as u32);
            c[i + j] += left * right;
        }
    }
    c
}

/// WLMP coefficients equivalent to the cascade `PA(IQ(x))`.
///
/// For odd `p`, `z |z|^(p-1) = z^((p+1)/2) conj(z)^((p-1)/2)`; substituting
/// `z = K1 x + K2 conj(x)` and expanding both binomials gives
/// `g_{p,q}[m] = h_p[m] c_{p,q}(K1, K2)`.
pub fn expand_to_wlmp(k1: Complex64, k2: Complex64, pa: &MemoryPolynomialLayer) -> Result<WlmpModel> {
    if let Some(&p) = pa.orders.iter().find(|&&p| p % 2 == 0) {
        return Err(Error::EvenOrder(p));
    }
    let max_order = *pa.orders.iter().max().ok_or_else(|| {
        Error::InvalidConfig("power amplifier has no orders".into())
    })?;
    let mut model = WlmpModel::zeros(max_order, pa.memory)?;
    let memory = pa.memory;
    let mut offset = 0;
    for p in (1..=max_order).step_by(2) {
        if let Some(h) = pa.taps(p) {
            let c = expansion(k1, k2, p.div_ceil(2), (p - 1) / 2);
            for (q, cq) in c.iter().enumerate() {
                let base = offset + q * memory;
                for (m, hm) in h.iter().enumerate() {
                    model.coefficients[base + m] = hm * cq;
                }
            }
        }
        offset += (p + 1) * memory;
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(9, 4), 126);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(60, 30), 118_264_581_564_861_424);
    }

    #[test]
    fn linear_case() {
        let k1 = Complex64::new(0.9, 0.1);
        let k2 = Complex64::new(0.05, -0.02);
        let h = vec![Complex64::new(1.0, 0.5), Complex64::new(-0.2, 0.3)];
        let pa = MemoryPolynomialLayer::with_coefficients(vec![1], 2, h.clone()).unwrap();
        let w = expand_to_wlmp(k1, k2, &pa).unwrap();
        let g10 = w.taps(1, 0).unwrap();
        let g11 = w.taps(1, 1).unwrap();
        for m in 0..2 {
            assert!((g11[m] - k1 * h[m]).norm() < 1e-15);
            assert!((g10[m] - k2 * h[m]).norm() < 1e-15);
        }
    }

    #[test]
    fn rejects_even_orders() {
        let pa = MemoryPolynomialLayer::full(2, 1).unwrap();
        assert!(matches!(
            expand_to_wlmp(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), &pa),
            Err(Error::EvenOrder(2))
        ));
    }
}
