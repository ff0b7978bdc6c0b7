use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{
    check_param_len, flops, Block, Gradients, Layer, MemoryPolynomialLayer, WidelyLinearLayer,
};
use crate::error::{Error, Result};

/// Serial composition: the output of layer `i` feeds layer `i + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cascade {
    pub layers: Vec<Layer>,
}

impl Cascade {
    pub fn new(layers: Vec<Layer>) -> Result<Self> {
        let c = Self { layers };
        c.validate()?;
        Ok(c)
    }

    /// Unfolded IQ-imbalance + odd-order PA model.
    pub fn iq_pa(max_order: usize, memory: usize) -> Result<Self> {
        Self::new(vec![
            WidelyLinearLayer::identity().into(),
            MemoryPolynomialLayer::odd(max_order, memory)?.into(),
        ])
    }

    /// PA memory polynomial without the IQ stage.
    pub fn pa_only(max_order: usize, memory: usize) -> Result<Self> {
        Self::new(vec![MemoryPolynomialLayer::odd(max_order, memory)?.into()])
    }

    pub fn validate(&self) -> Result<()> {
        if self.layers.is_empty() {
            return Err(Error::InvalidConfig("cascade needs at least one layer".into()));
        }
        self.layers.iter().try_for_each(Layer::validate)
    }

    /// Parameter count of each layer, in order.
    pub fn layer_param_counts(&self) -> Vec<usize> {
        self.layers.iter().map(|l| l.param_count()).collect()
    }
}

impl Block for Cascade {
    fn evaluate(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut signal = x.to_vec();
        for layer in &self.layers {
            signal = layer.evaluate(&signal);
        }
        signal
    }

    fn forward(&mut self, x: &[Complex64]) -> Vec<Complex64> {
        let mut signal = x.to_vec();
        for layer in &mut self.layers {
            signal = layer.forward(&signal);
        }
        signal
    }

    fn backward(&mut self, adjoint: &[Complex64]) -> Result<Gradients> {
        let mut grads = Vec::with_capacity(self.layers.len());
        let mut adj = adjoint.to_vec();
        for layer in self.layers.iter_mut().rev() {
            let g = layer.backward(&adj)?;
            adj = g.input;
            grads.push(g.params);
        }
        let params = grads.into_iter().rev().flatten().collect();
        Ok(Gradients { input: adj, params })
    }

    fn params(&self) -> Vec<Complex64> {
        self.layers.iter().flat_map(|l| l.params()).collect()
    }

    fn set_params(&mut self, params: &[Complex64]) -> Result<()> {
        check_param_len(self.param_count(), params.len())?;
        let mut offset = 0;
        for layer in &mut self.layers {
            let n = layer.param_count();
            layer.set_params(&params[offset..offset + n])?;
            offset += n;
        }
        Ok(())
    }

    fn param_count(&self) -> usize {
        self.layers.iter().map(|l| l.param_count()).sum()
    }

    fn flop_count(&self) -> u64 {
        self.layers.iter().map(|l| l.flop_count()).sum()
    }

    fn memory(&self) -> usize {
        self.layers.iter().map(|l| l.memory() - 1).sum::<usize>() + 1
    }

    fn kind(&self) -> &'static str {
        "cascade"
    }
}

/// Branches fed by the same input whose outputs are summed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParallelSumModel {
    pub branches: Vec<Cascade>,
}

impl ParallelSumModel {
    pub fn new(branches: Vec<Cascade>) -> Result<Self> {
        let m = Self { branches };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.branches.is_empty() {
            return Err(Error::InvalidConfig("parallel model needs a branch".into()));
        }
        self.branches.iter().try_for_each(Cascade::validate)
    }
}

impl Block for ParallelSumModel {
    fn evaluate(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); x.len()];
        for b in &self.branches {
            for (acc, v) in y.iter_mut().zip(b.evaluate(x)) {
                *acc += v;
            }
        }
        y
    }

    fn forward(&mut self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); x.len()];
        for b in &mut self.branches {
            for (acc, v) in y.iter_mut().zip(b.forward(x)) {
                *acc += v;
            }
        }
        y
    }

    fn backward(&mut self, adjoint: &[Complex64]) -> Result<Gradients> {
        let mut input = vec![Complex64::new(0.0, 0.0); adjoint.len()];
        let mut params = Vec::new();
        for b in &mut self.branches {
            let g = b.backward(adjoint)?;
            for (acc, v) in input.iter_mut().zip(g.input) {
                *acc += v;
            }
            params.extend(g.params);
        }
        Ok(Gradients { input, params })
    }

    fn params(&self) -> Vec<Complex64> {
        self.branches.iter().flat_map(|b| b.params()).collect()
    }

    fn set_params(&mut self, params: &[Complex64]) -> Result<()> {
        check_param_len(self.param_count(), params.len())?;
        let mut offset = 0;
        for b in &mut self.branches {
            let n = b.param_count();
            b.set_params(&params[offset..offset + n])?;
            offset += n;
        }
        Ok(())
    }

    fn param_count(&self) -> usize {
        self.branches.iter().map(|b| b.param_count()).sum()
    }

    fn flop_count(&self) -> u64 {
        let branches: u64 = self.branches.iter().map(|b| b.flop_count()).sum();
        branches + (self.branches.len() as u64 - 1) * flops::CADD
    }

    fn memory(&self) -> usize {
        self.branches.iter().map(|b| b.memory()).max().unwrap_or(1)
    }

    fn kind(&self) -> &'static str {
        "parallel_sum"
    }
}
