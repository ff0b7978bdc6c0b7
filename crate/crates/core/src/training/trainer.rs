use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{cost_adjoint, ftrl_step, gd_step, mse_cost, streams, FtrlState, Problem};
use crate::error::{Error, Result};
use crate::layers::{flops, Block};
use crate::numerics::RngStream;

pub const FIT_REPORT_SCHEMA_VERSION: u32 = 1;

/// A run aborts once a batch cost exceeds this multiple of the first one.
pub const DIVERGENCE_FACTOR: f64 = 1e6;

/// Lower bound on the divergence reference, relative to the first batch's
/// cost for an all-zero prediction.
const REFERENCE_COST_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizerKind {
    Gd,
    Ftrl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitScheme {
    VariancePreserving,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainingConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub optimizer: OptimizerKind,
    pub ftrl_learning_rate_power: f64,
    pub ftrl_initial_accumulator: f64,
    pub seed: u64,
    pub init_scheme: InitScheme,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        Self {
            epochs: 50,
            batch_size: 32,
            learning_rate: 0.01,
            optimizer: OptimizerKind::Ftrl,
            ftrl_learning_rate_power: -0.5,
            ftrl_initial_accumulator: 0.1,
            seed: 0,
            init_scheme: InitScheme::VariancePreserving,
        }
    }
}

impl TrainingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 || self.batch_size == 0 {
            return Err(Error::InvalidConfig("epochs and batch_size must be >= 1".into()));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if !(self.ftrl_initial_accumulator > 0.0) || self.ftrl_learning_rate_power > 0.0 {
            return Err(Error::InvalidConfig(
                "FTRL needs a positive initial accumulator and a non-positive power".into(),
            ));
        }
        Ok(())
    }

    /// Short SHA-256 digest of the canonical JSON form.
    pub fn fingerprint(&self) -> String {
        let json = serde_json::to_string(self).expect("config serialises");
        hex::encode(&Sha256::digest(json.as_bytes())[..8])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_db: f64,
    pub test_db: Option<f64>,
}

/// Outcome of one training run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub schema_version: u32,
    pub model_kind: String,
    pub config: TrainingConfig,
    pub config_fingerprint: String,
    pub epochs: Vec<EpochRecord>,
    pub final_params: Vec<Complex64>,
    pub param_count: usize,
    pub flop_count: u64,
    pub flop_convention: String,
    /// Excluded from the serialised report so that reports are reproducible.
    #[serde(skip)]
    pub wall_clock_s: f64,
}

impl FitReport {
    pub fn final_train_db(&self) -> f64 {
        self.epochs.last().map_or(f64::NAN, |e| e.train_db)
    }

    pub fn final_test_db(&self) -> Option<f64> {
        self.epochs.last().and_then(|e| e.test_db)
    }

    /// `epoch,train_db,test_db` rows.
    pub fn epochs_csv(&self) -> String {
        let mut out = String::from("epoch,train_db,test_db\n");
        for e in &self.epochs {
            let test = e.test_db.map(|v| v.to_string()).unwrap_or_default();
            out.push_str(&format!("{},{},{}\n", e.epoch, e.train_db, test));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialise")
    }
}

enum Optimizer {
    Gd,
    Ftrl(FtrlState),
}

/// Contiguous windows `[start, end)` covering `0..n`.
fn batch_windows(n: usize, size: usize) -> Vec<(usize, usize)> {
    (0..n).step_by(size).map(|s| (s, (s + size).min(n))).collect()
}

/// Trains `model` on the training prefix of `problem`.
///
/// Each epoch visits contiguous mini-batches in a freshly shuffled order. A
/// batch is run with up to `memory - 1` preceding samples as context; those
/// samples carry a zero adjoint, so the delay lines see the true history.
/// Train and test cancellation are measured after every epoch at original
/// scale.
pub fn train<B: Block + ?Sized>(
    model: &mut B,
    problem: &Problem,
    config: &TrainingConfig,
) -> Result<FitReport> {
    config.validate()?;
    if problem.n_train == 0 {
        return Err(Error::EmptySignal);
    }
    let started = Instant::now();
    let mut shuffle = RngStream::new(config.seed, streams::SHUFFLE);
    let mut optimizer = match config.optimizer {
        OptimizerKind::Gd => Optimizer::Gd,
        OptimizerKind::Ftrl => Optimizer::Ftrl(FtrlState::new(
            model.param_count(),
            config.ftrl_learning_rate_power,
            config.ftrl_initial_accumulator,
        )),
    };
    let context = model.memory() - 1;
    let mut windows = batch_windows(problem.n_train, config.batch_size);
    let mut reference_cost: Option<f64> = None;
    let mut records = Vec::with_capacity(config.epochs);

    for epoch in 0..config.epochs {
        shuffle.shuffle(&mut windows);
        for (batch, &(start, end)) in windows.iter().enumerate() {
            let lo = start.saturating_sub(context);
            let skip = start - lo;
            let y = model.forward(&problem.x[lo..end]);
            let target = &problem.t[start..end];
            let cost = mse_cost(&y[skip..], target)?;
            let diverged = match reference_cost {
                None => {
                    let zero_cost = mse_cost(&vec![Complex64::new(0.0, 0.0); target.len()], target)?;
                    reference_cost = Some(cost.max(REFERENCE_COST_FLOOR * zero_cost));
                    !cost.is_finite()
                }
                Some(c0) => !cost.is_finite() || cost > DIVERGENCE_FACTOR * c0,
            };
            if diverged {
                return Err(Error::Diverged {
                    epoch,
                    batch,
                    reason: format!("batch cost {cost:e}"),
                });
            }
            let mut adjoint = vec![Complex64::new(0.0, 0.0); skip];
            adjoint.extend(cost_adjoint(&y[skip..], target)?);
            let grads = model.backward(&adjoint)?;
            let params = model.params();
            let step = match &mut optimizer {
                Optimizer::Gd => gd_step(&params, &grads.params, config.learning_rate),
                Optimizer::Ftrl(state) => {
                    ftrl_step(state, &params, &grads.params, config.learning_rate)
                }
            };
            let next = step.map_err(|e| Error::Diverged {
                epoch,
                batch,
                reason: e.to_string(),
            })?;
            model.set_params(&next)?;
        }
        let (train_c, test_c) = problem.evaluate(model)?;
        records.push(EpochRecord {
            epoch: epoch + 1,
            train_db: train_c.c_db,
            test_db: test_c.map(|c| c.c_db),
        });
    }

    Ok(FitReport {
        schema_version: FIT_REPORT_SCHEMA_VERSION,
        model_kind: model.kind().to_string(),
        config: config.clone(),
        config_fingerprint: config.fingerprint(),
        epochs: records,
        final_params: model.params(),
        param_count: model.param_count(),
        flop_count: model.flop_count(),
        flop_convention: flops::CONVENTION.to_string(),
        wall_clock_s: started.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows_cover_range() {
        assert_eq!(batch_windows(10, 4), vec![(0, 4), (4, 8), (8, 10)]);
        assert_eq!(batch_windows(3, 8), vec![(0, 3)]);
    }

    #[test]
    fn config_validation() {
        assert!(TrainingConfig::default().validate().is_ok());
        let bad = TrainingConfig {
            epochs: 0,
            ..TrainingConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad_lr = TrainingConfig {
            learning_rate: -1.0,
            ..TrainingConfig::default()
        };
        assert!(bad_lr.validate().is_err());
    }

    #[test]
    fn fingerprint_is_stable() {
        let c = TrainingConfig::default();
        assert_eq!(c.fingerprint(), c.clone().fingerprint());
        let d = TrainingConfig { seed: 1, ..c.clone() };
        assert_ne!(c.fingerprint(), d.fingerprint());
    }
}
