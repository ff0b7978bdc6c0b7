//! Parameterised non-linear blocks with closed-form Wirtinger backward passes.
//!
//! Every block maps a complex sequence to a sequence of equal length. Samples
//! before the start of the input are taken as zero. `forward` caches the input
//! so that a following `backward` can map the output adjoint
//! `dC/d conj(y)` to the input adjoint `dC/d conj(x)` and to the parameter
//! gradients `dC/d conj(theta)`. Because the cost is real,
//! `dC/dy = conj(dC/d conj(y))`, so one adjoint per sample is enough.

mod classic;
mod composite;
mod fir;
pub mod flops;
mod memory_poly;
mod model;
mod power;
mod widely_linear;

pub use classic::{make_classic_model, ClassicKind};
pub use composite::{Cascade, ParallelSumModel};
pub use fir::FirFilterLayer;
pub use memory_poly::MemoryPolynomialLayer;
pub use model::{Model, ModelDocument, MODEL_FORMAT, MODEL_FORMAT_VERSION};
pub use power::{PowerMode, StaticPowerLayer};
pub use widely_linear::WidelyLinearLayer;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Output of a backward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    /// `dC/d conj(x[n])` for every input sample.
    pub input: Vec<Complex64>,
    /// `dC/d conj(theta_k)` in the block's flat parameter order.
    pub params: Vec<Complex64>,
}

/// Common interface of layers, compositions and the WLMP baseline.
pub trait Block {
    /// Pure evaluation; does not touch the backward cache.
    fn evaluate(&self, x: &[Complex64]) -> Vec<Complex64>;

    /// Evaluates and caches what `backward` needs.
    fn forward(&mut self, x: &[Complex64]) -> Vec<Complex64>;

    /// Backpropagates `adjoint = dC/d conj(y)` through the last forward call.
    fn backward(&mut self, adjoint: &[Complex64]) -> Result<Gradients>;

    /// Flat copy of the trainable parameters.
    fn params(&self) -> Vec<Complex64>;

    fn set_params(&mut self, params: &[Complex64]) -> Result<()>;

    /// Number of complex trainable parameters.
    fn param_count(&self) -> usize;

    /// Real FLOPs per output sample, see [`flops`].
    fn flop_count(&self) -> u64;

    /// Number of input samples each output sample depends on.
    fn memory(&self) -> usize;

    /// Short structural name used in reports.
    fn kind(&self) -> &'static str {
        "block"
    }
}

/// One block of the catalog.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Layer {
    Fir(FirFilterLayer),
    StaticPower(StaticPowerLayer),
    WidelyLinear(WidelyLinearLayer),
    MemoryPolynomial(MemoryPolynomialLayer),
}

macro_rules! dispatch {
    ($self:expr, $inner:ident => $body:expr) => {
        match $self {
            Layer::Fir($inner) => $body,
            Layer::StaticPower($inner) => $body,
            Layer::WidelyLinear($inner) => $body,
            Layer::MemoryPolynomial($inner) => $body,
        }
    };
}

impl Layer {
    pub fn name(&self) -> &'static str {
        match self {
            Layer::Fir(_) => "fir",
            Layer::StaticPower(_) => "static_power",
            Layer::WidelyLinear(_) => "widely_linear",
            Layer::MemoryPolynomial(_) => "memory_polynomial",
        }
    }

    /// Checks structural invariants, e.g. after deserialisation.
    pub fn validate(&self) -> Result<()> {
        dispatch!(self, l => l.validate())
    }
}

impl Block for Layer {
    fn evaluate(&self, x: &[Complex64]) -> Vec<Complex64> {
        dispatch!(self, l => l.evaluate(x))
    }
    fn forward(&mut self, x: &[Complex64]) -> Vec<Complex64> {
        dispatch!(self, l => l.forward(x))
    }
    fn backward(&mut self, adjoint: &[Complex64]) -> Result<Gradients> {
        dispatch!(self, l => l.backward(adjoint))
    }
    fn params(&self) -> Vec<Complex64> {
        dispatch!(self, l => l.params())
    }
    fn set_params(&mut self, params: &[Complex64]) -> Result<()> {
        dispatch!(self, l => l.set_params(params))
    }
    fn param_count(&self) -> usize {
        dispatch!(self, l => l.param_count())
    }
    fn flop_count(&self) -> u64 {
        dispatch!(self, l => l.flop_count())
    }
    fn memory(&self) -> usize {
        dispatch!(self, l => l.memory())
    }
    fn kind(&self) -> &'static str {
        self.name()
    }
}

impl From<FirFilterLayer> for Layer {
    fn from(l: FirFilterLayer) -> Self {
        Layer::Fir(l)
    }
}

impl From<StaticPowerLayer> for Layer {
    fn from(l: StaticPowerLayer) -> Self {
        Layer::StaticPower(l)
    }
}

impl From<WidelyLinearLayer> for Layer {
    fn from(l: WidelyLinearLayer) -> Self {
        Layer::WidelyLinear(l)
    }
}

impl From<MemoryPolynomialLayer> for Layer {
    fn from(l: MemoryPolynomialLayer) -> Self {
        Layer::MemoryPolynomial(l)
    }
}

pub(crate) fn check_param_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch(format!(
            "expected {expected} parameters, got {got}"
        )));
    }
    Ok(())
}

pub(crate) fn check_adjoint(cache: &Option<Vec<Complex64>>, adjoint: &[Complex64]) -> Result<()> {
    match cache {
        None => Err(Error::StaleCache),
        Some(x) if x.len() != adjoint.len() => Err(Error::DimensionMismatch(format!(
            "adjoint of length {} for a forward pass of length {}",
            adjoint.len(),
            x.len()
        ))),
        Some(_) => Ok(()),
    }
}

/// `y[n] = sum_m h[m] u[n - m]` with zero history.
pub(crate) fn convolve(h: &[Complex64], u: &[Complex64]) -> Vec<Complex64> {
    let mut y = vec![Complex64::new(0.0, 0.0); u.len()];
    for (n, yn) in y.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, hm) in h.iter().enumerate().take(n + 1) {
            acc += hm * u[n - m];
        }
        *yn = acc;
    }
    y
}

/// Adjoint of [`convolve`] w.r.t. `conj(h)`: `sum_n a[n] conj(u[n - m])`.
pub(crate) fn correlate_taps(adjoint: &[Complex64], u: &[Complex64], taps: usize) -> Vec<Complex64> {
    (0..taps)
        .map(|m| {
            adjoint
                .iter()
                .skip(m)
                .zip(u)
                .map(|(a, un)| a * un.conj())
                .sum()
        })
        .collect()
}

/// Adjoint of [`convolve`] w.r.t. `conj(u)`: `sum_m a[r + m] conj(h[m])`.
pub(crate) fn correlate_input(adjoint: &[Complex64], h: &[Complex64]) -> Vec<Complex64> {
    let n = adjoint.len();
    (0..n)
        .map(|r| {
            h.iter()
                .enumerate()
                .take(n - r)
                .map(|(m, hm)| adjoint[r + m] * hm.conj())
                .sum()
        })
        .collect()
}
