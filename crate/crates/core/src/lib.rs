//! Identification of cascaded RF transceiver impairments by deep unfolding.
//!
//! The transmit chain is modelled as an IQ-imbalance stage followed by an
//! odd-order power-amplifier memory polynomial. Each physical block is a
//! [`layers::Layer`] with a closed-form Wirtinger backward pass, so the
//! cascade can be trained like a small network on the native parameters
//! (`K1`, `K2`, `h_p[m]`). The widely-linear memory polynomial fitted by least
//! squares ([`estimation::WlmpModel`]) is the linear-in-parameters baseline.
//!
//! Complex derivatives follow the conjugate (Wirtinger) convention throughout:
//! the gradient of a real cost `C` with respect to a complex parameter `h` is
//! `dC/d conj(h)`, and a single adjoint `dC/d conj(y)` is propagated backwards.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod datagen;
pub mod error;
pub mod estimation;
pub mod layers;
pub mod metrics;
pub mod numerics;
pub mod training;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use numerics::{ComplexSignal, RngStream};
