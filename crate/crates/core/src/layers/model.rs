use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Block, Cascade, Gradients, ParallelSumModel};
use crate::error::{Error, Result};
use crate::estimation::WlmpModel;

pub const MODEL_FORMAT: &str = "rfunfold-model";
pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Any trainable or fitted model the library can evaluate and serialise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    Cascade(Cascade),
    ParallelSum(ParallelSumModel),
    Wlmp(WlmpModel),
}

macro_rules! dispatch {
    ($self:expr, $inner:ident => $body:expr) => {
        match $self {
            Model::Cascade($inner) => $body,
            Model::ParallelSum($inner) => $body,
            Model::Wlmp($inner) => $body,
        }
    };
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::Cascade(_) => "cascade",
            Model::ParallelSum(_) => "parallel_sum",
            Model::Wlmp(_) => "wlmp",
        }
    }

    pub fn validate(&self) -> Result<()> {
        dispatch!(self, m => m.validate())
    }
}

impl Block for Model {
    fn evaluate(&self, x: &[Complex64]) -> Vec<Complex64> {
        dispatch!(self, m => m.evaluate(x))
    }
    fn forward(&mut self, x: &[Complex64]) -> Vec<Complex64> {
        dispatch!(self, m => m.forward(x))
    }
    fn backward(&mut self, adjoint: &[Complex64]) -> Result<Gradients> {
        dispatch!(self, m => m.backward(adjoint))
    }
    fn params(&self) -> Vec<Complex64> {
        dispatch!(self, m => m.params())
    }
    fn set_params(&mut self, params: &[Complex64]) -> Result<()> {
        dispatch!(self, m => m.set_params(params))
    }
    fn param_count(&self) -> usize {
        dispatch!(self, m => m.param_count())
    }
    fn flop_count(&self) -> u64 {
        dispatch!(self, m => m.flop_count())
    }
    fn memory(&self) -> usize {
        dispatch!(self, m => m.memory())
    }
    fn kind(&self) -> &'static str {
        self.name()
    }
}

impl From<Cascade> for Model {
    fn from(c: Cascade) -> Self {
        Model::Cascade(c)
    }
}

impl From<ParallelSumModel> for Model {
    fn from(m: ParallelSumModel) -> Self {
        Model::ParallelSum(m)
    }
}

impl From<WlmpModel> for Model {
    fn from(m: WlmpModel) -> Self {
        Model::Wlmp(m)
    }
}

/// On-disk model: a JSON object with a format tag, a version and the model.
/// Complex numbers are `[re, im]` pairs and round-trip bit-exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub format: String,
    pub format_version: u32,
    pub model: Model,
}

impl ModelDocument {
    pub fn new(model: Model) -> Self {
        Self {
            format: MODEL_FORMAT.to_string(),
            format_version: MODEL_FORMAT_VERSION,
            model,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model documents always serialise")
    }

    /// Parses and validates a document; never panics on malformed input.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        if doc.format != MODEL_FORMAT {
            return Err(Error::Format(format!("unexpected format tag `{}`", doc.format)));
        }
        if doc.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported format version {}",
                doc.format_version
            )));
        }
        doc.model.validate()?;
        Ok(doc)
    }
}
