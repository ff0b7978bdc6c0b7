//! Numerical building blocks shared by every other module.

mod lstsq;
mod rng;
mod signal;
mod wirtinger;

pub use lstsq::{solve_least_squares, solve_normal_equations, DesignMatrix};
pub use rng::{complex_gaussian, RngStream};
pub use signal::ComplexSignal;
pub use wirtinger::{wirtinger_finite_difference, DEFAULT_FD_STEP};

use num_complex::Complex64;

/// Sum of squared magnitudes.
pub fn energy(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// `||v||_inf` over complex magnitudes.
pub fn max_abs(v: &[Complex64]) -> f64 {
    v.iter().fold(0.0, |m, z| m.max(z.norm()))
}

pub fn all_finite(v: &[Complex64]) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}
