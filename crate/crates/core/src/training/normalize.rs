use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layers::Block;
use crate::metrics::{cancellation_db, CancellationResult};
use crate::numerics::ComplexSignal;

/// Affine maps bringing input and output to zero mean and unit power.
///
/// Statistics come from the training split only. After [`Normalizer::fit`]
/// with centring enabled, the training data has zero mean and
/// `E|x|^2 = 1`, i.e. variance 1/2 per quadrature for circular data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalizer {
    pub input_mean: Complex64,
    pub output_mean: Complex64,
    pub input_scale: f64,
    pub output_scale: f64,
}

fn stats(v: &[Complex64], center: bool) -> Result<(Complex64, f64)> {
    if v.is_empty() {
        return Err(Error::EmptySignal);
    }
    let mean = if center {
        v.iter().sum::<Complex64>() / v.len() as f64
    } else {
        Complex64::new(0.0, 0.0)
    };
    let power = v.iter().map(|z| (z - mean).norm_sqr()).sum::<f64>() / v.len() as f64;
    if !(power > 0.0 && power.is_finite()) {
        return Err(Error::InvalidConfig("cannot normalise a constant signal".into()));
    }
    Ok((mean, power.sqrt()))
}

impl Normalizer {
    pub fn fit(x: &[Complex64], y: &[Complex64], center: bool) -> Result<Self> {
        let (input_mean, input_scale) = stats(x, center)?;
        let (output_mean, output_scale) = stats(y, center)?;
        Ok(Self {
            input_mean,
            output_mean,
            input_scale,
            output_scale,
        })
    }

    pub fn identity() -> Self {
        Self {
            input_mean: Complex64::new(0.0, 0.0),
            output_mean: Complex64::new(0.0, 0.0),
            input_scale: 1.0,
            output_scale: 1.0,
        }
    }

    pub fn normalize_input(&self, x: &[Complex64]) -> Vec<Complex64> {
        x.iter().map(|z| (z - self.input_mean) / self.input_scale).collect()
    }

    pub fn normalize_output(&self, y: &[Complex64]) -> Vec<Complex64> {
        y.iter().map(|z| (z - self.output_mean) / self.output_scale).collect()
    }

    pub fn denormalize_input(&self, x: &[Complex64]) -> Vec<Complex64> {
        x.iter().map(|z| z * self.input_scale + self.input_mean).collect()
    }

    pub fn denormalize_output(&self, y: &[Complex64]) -> Vec<Complex64> {
        y.iter().map(|z| z * self.output_scale + self.output_mean).collect()
    }
}

/// A normalised identification problem: the full time series with a
/// train prefix and a test suffix.
#[derive(Debug, Clone)]
pub struct Problem {
    /// normalised input, train then test
    pub x: Vec<Complex64>,
    /// normalised target
    pub t: Vec<Complex64>,
    /// received signal at original scale, used by the metric
    pub y_raw: Vec<Complex64>,
    pub n_train: usize,
    pub normalizer: Normalizer,
}

impl Problem {
    /// Builds a problem from contiguous train and test splits.
    pub fn from_splits(
        train_x: &ComplexSignal,
        train_y: &ComplexSignal,
        test_x: &ComplexSignal,
        test_y: &ComplexSignal,
        center: bool,
    ) -> Result<Self> {
        if train_x.len() != train_y.len() || test_x.len() != test_y.len() {
            return Err(Error::DimensionMismatch("input and output splits differ in length".into()));
        }
        train_x.validate()?;
        train_y.validate()?;
        let normalizer = Normalizer::fit(&train_x.samples, &train_y.samples, center)?;
        let raw_x: Vec<Complex64> = train_x.samples.iter().chain(&test_x.samples).copied().collect();
        let y_raw: Vec<Complex64> = train_y.samples.iter().chain(&test_y.samples).copied().collect();
        Ok(Self {
            x: normalizer.normalize_input(&raw_x),
            t: normalizer.normalize_output(&y_raw),
            y_raw,
            n_train: train_x.len(),
            normalizer,
        })
    }

    pub fn n_test(&self) -> usize {
        self.x.len() - self.n_train
    }

    pub fn train_input(&self) -> &[Complex64] {
        &self.x[..self.n_train]
    }

    /// The training prefix re-split into train and validation, keeping the
    /// normalisation of `self`.
    pub fn validation_split(&self, fraction: f64) -> Result<Self> {
        if !(fraction > 0.0 && fraction < 1.0) {
            return Err(Error::InvalidConfig(format!("fraction {fraction} outside (0, 1)")));
        }
        let n_train = (self.n_train as f64 * fraction).round() as usize;
        if n_train == 0 || n_train >= self.n_train {
            return Err(Error::DegenerateSplit("training split too short to validate".into()));
        }
        Ok(Self {
            x: self.x[..self.n_train].to_vec(),
            t: self.t[..self.n_train].to_vec(),
            y_raw: self.y_raw[..self.n_train].to_vec(),
            n_train,
            normalizer: self.normalizer,
        })
    }

    /// Model prediction at original scale over the full series.
    pub fn predict<B: Block + ?Sized>(&self, model: &B) -> Vec<Complex64> {
        self.normalizer.denormalize_output(&model.evaluate(&self.x))
    }

    /// Train and (if present) test cancellation at original scale.
    pub fn evaluate<B: Block + ?Sized>(
        &self,
        model: &B,
    ) -> Result<(CancellationResult, Option<CancellationResult>)> {
        let pred = self.predict(model);
        let train = cancellation_db(&self.y_raw[..self.n_train], &pred[..self.n_train])?;
        let test = if self.n_test() > 0 {
            Some(cancellation_db(&self.y_raw[self.n_train..], &pred[self.n_train..])?)
        } else {
            None
        };
        Ok((train, test))
    }
}
