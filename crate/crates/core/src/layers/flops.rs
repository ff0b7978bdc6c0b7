//! Real floating-point operation counts per output sample.
//!
//! Convention: a complex multiply is 6 FLOPs (4 real multiplies, 2 real adds),
//! a complex add is 2, scaling a complex number by a real is 2, `|z|^2` is 3,
//! a real multiply, add or square root is 1, and conjugation is free. Powers
//! of `|z|` are built incrementally (`|z|^(e+2) = |z|^e * |z|^2`) and shared by
//! every order of a block. A layer's static non-linearity is evaluated once
//! per sample and the results travel down the delay line; the WLMP baseline is
//! a single linear-in-parameters block evaluated in direct form, so its basis
//! monomials are formed at every tap.

/// Complex multiply.
pub const CMUL: u64 = 6;
/// Complex add.
pub const CADD: u64 = 2;
/// Complex times real.
pub const CSCALE: u64 = 2;
/// Squared magnitude.
pub const ABS2: u64 = 3;
/// Real multiply, add or square root.
pub const REAL: u64 = 1;

/// Human-readable statement of the convention, printed with reports.
pub const CONVENTION: &str = "complex mul = 6, complex add = 2, complex*real = 2, |z|^2 = 3, \
real mul/add/sqrt = 1, conj = 0; |z| powers built incrementally and shared across orders; \
layer non-linearities evaluated once per sample; WLMP basis formed per tap (direct form)";

/// `taps` complex products summed into one output.
pub fn dot_product(taps: usize) -> u64 {
    if taps == 0 {
        return 0;
    }
    taps as u64 * CMUL + (taps as u64 - 1) * CADD
}

/// Cost of producing `z |z|^(p-1)` for every `p` in `orders` from one sample.
pub fn baseband_powers(orders: &[usize]) -> u64 {
    let exps: Vec<usize> = orders.iter().filter(|&&p| p >= 2).map(|&p| p - 1).collect();
    if exps.is_empty() {
        return 0;
    }
    let mut cost = ABS2;
    if let Some(max_even) = exps.iter().copied().filter(|e| e % 2 == 0).max() {
        cost += (max_even as u64 / 2 - 1) * REAL;
    }
    if let Some(max_odd) = exps.iter().copied().filter(|e| e % 2 == 1).max() {
        // sqrt for |z|, then the odd chain
        cost += REAL + (max_odd as u64 - 1) / 2 * REAL;
    }
    cost + exps.len() as u64 * CSCALE
}

/// Cost of `z^p` by repeated multiplication.
pub fn raw_power(p: usize) -> u64 {
    p.saturating_sub(1) as u64 * CMUL
}

/// Cost of forming every odd-order WLMP monomial `x^q conj(x)^(p-q)` for one
/// delayed sample, `p` odd up to `max_order`.
///
/// With `q > p/2` the monomial is `x^(2q-p) |x|^(2(p-q))`; the remaining half
/// are conjugates. Odd powers of `x` come from `x^2`, even powers of `|x|`
/// from `|x|^2`, and each mixed monomial costs one complex-by-real scale.
pub fn wlmp_monomials(max_order: usize) -> u64 {
    if max_order < 3 {
        return 0;
    }
    // x^2, then x^3, x^5, ..., x^P
    let odd_powers = (max_order as u64 - 1) / 2;
    let mut cost = CMUL + odd_powers * CMUL;
    let max_mag = (max_order as u64 - 1) / 2;
    cost += ABS2 + (max_mag - 1) * REAL;
    let mut mixed = 0;
    for p in (3..=max_order).step_by(2) {
        mixed += (p as u64 - 1) / 2;
    }
    cost + mixed * CSCALE
}
