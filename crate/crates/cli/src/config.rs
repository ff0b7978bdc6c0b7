use std::path::{Path, PathBuf};

use rfunfold::datagen::{GroundTruth, OfdmConfig};
use rfunfold::layers::Cascade;
use rfunfold::training::{SearchSpace, TrainingConfig};
use rfunfold::RngStream;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// Everything a command needs; stored next to its outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub seed: u64,
    /// directory holding `manifest.json` and the signal files
    pub data_dir: PathBuf,
    pub split: f64,
    /// container used by `generate`
    pub signal_format: SignalFormat,
    pub ofdm: OfdmConfig,
    pub truth: TruthConfig,
    pub model: ModelSpec,
    pub wlmp: WlmpSpec,
    pub normalization: NormalizationConfig,
    pub training: TrainingConfig,
    pub search: SearchConfig,
    pub experiment: MultiInitConfig,
    pub gradcheck: GradCheckConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            data_dir: PathBuf::from("data"),
            split: 0.9,
            signal_format: SignalFormat::Bin,
            ofdm: OfdmConfig::default(),
            truth: TruthConfig::default(),
            model: ModelSpec::default(),
            wlmp: WlmpSpec::default(),
            normalization: NormalizationConfig::default(),
            training: TrainingConfig::default(),
            search: SearchConfig::default(),
            experiment: MultiInitConfig::default(),
            gradcheck: GradCheckConfig::default(),
        }
    }
}

/// Ground truth for `generate`: sampled from the seed unless given verbatim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TruthConfig {
    pub explicit: Option<GroundTruth>,
    /// applies to the sampled truth; `null` disables noise
    pub noise_floor_db: Option<f64>,
    pub suppression_db: f64,
}

impl Default for TruthConfig {
    fn default() -> Self {
        Self {
            explicit: None,
            noise_floor_db: Some(-45.0),
            suppression_db: 53.0,
        }
    }
}

impl TruthConfig {
    pub fn resolve(&self, seed: u64) -> CliResult<GroundTruth> {
        let truth = match &self.explicit {
            Some(t) => t.clone(),
            None => {
                let mut rng = RngStream::new(seed, rfunfold::datagen::streams::GROUND_TRUTH);
                GroundTruth {
                    noise_floor_db: self.noise_floor_db,
                    suppression_db: self.suppression_db,
                    ..GroundTruth::sample(&mut rng)?
                }
            }
        };
        truth.validate()?;
        Ok(truth)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelSpec {
    pub max_order: usize,
    pub memory: usize,
    /// include the widely-linear IQ layer in front of the PA
    pub iq: bool,
}

impl Default for ModelSpec {
    fn default() -> Self {
        Self {
            max_order: 5,
            memory: 13,
            iq: true,
        }
    }
}

impl ModelSpec {
    pub fn build(&self) -> rfunfold::Result<Cascade> {
        if self.iq {
            Cascade::iq_pa(self.max_order, self.memory)
        } else {
            Cascade::pa_only(self.max_order, self.memory)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalFormat {
    Bin,
    Csv,
}

impl SignalFormat {
    pub fn extension(self) -> &'static str {
        match self {
            SignalFormat::Bin => "bin",
            SignalFormat::Csv => "csv",
        }
    }
}

/// Least-squares baseline dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WlmpSpec {
    pub max_order: usize,
    pub memory: usize,
}

impl Default for WlmpSpec {
    fn default() -> Self {
        Self {
            max_order: 5,
            memory: 13,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
#[derive(Default)]
pub struct NormalizationConfig {
    /// subtract training means as well as scaling
    pub center: bool,
}


#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SearchConfig {
    /// number of sampled configurations; 0 trains with `training` as given
    pub budget: usize,
    /// fraction of the training split used for fitting during the search
    pub fit_fraction: f64,
    pub space: SearchSpace,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            budget: 0,
            fit_fraction: 0.9,
            space: SearchSpace::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MultiInitConfig {
    pub n_inits: usize,
}

impl Default for MultiInitConfig {
    fn default() -> Self {
        Self { n_inits: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GradCheckConfig {
    pub points: usize,
    pub samples: usize,
    pub tolerance: f64,
    pub step: f64,
}

impl Default for GradCheckConfig {
    fn default() -> Self {
        Self {
            points: 10,
            samples: 64,
            tolerance: 1e-6,
            step: rfunfold::numerics::DEFAULT_FD_STEP,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises") + "\n"
    }

    /// Overlays the file at `path` on the defaults, then applies `key=value`
    /// overrides in order.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> CliResult<Self> {
        let mut value = serde_json::to_value(Self::default()).expect("config serialises");
        if let Some(p) = path {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            let file = serde_json::from_str::<Value>(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            merge(&mut value, file);
        }
        for o in overrides {
            apply_override(&mut value, o)?;
        }
        let cfg: Self = serde_json::from_value(value).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        if !(self.split > 0.0 && self.split < 1.0) {
            return Err(CliError::Config(format!("split must lie in (0, 1), got {}", self.split)));
        }
        self.ofdm.validate()?;
        self.training.validate()?;
        self.model.build()?;
        rfunfold::estimation::WlmpModel::zeros(self.wlmp.max_order, self.wlmp.memory)?;
        if self.experiment.n_inits == 0 {
            return Err(CliError::Config("experiment.n_inits must be >= 1".into()));
        }
        if !(self.search.fit_fraction > 0.0 && self.search.fit_fraction < 1.0) {
            return Err(CliError::Config("search.fit_fraction must lie in (0, 1)".into()));
        }
        let g = &self.gradcheck;
        if g.points == 0 || g.samples == 0 || !(g.tolerance > 0.0) || !(g.step > 0.0) {
            return Err(CliError::Config("gradcheck settings must be positive".into()));
        }
        Ok(())
    }
}

/// Recursively overlays `patch` on `base`; non-object values replace.
fn merge(base: &mut Value, patch: Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (k, v) in p {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

/// Sets the dotted `key` of a JSON object tree. The value is parsed as JSON
/// when possible and taken as a string otherwise.
pub fn apply_override(root: &mut Value, assignment: &str) -> CliResult<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("override `{assignment}` is not key=value")))?;
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(CliError::Config(format!("malformed override key `{key}`")));
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = root;
    for part in &parts[..parts.len() - 1] {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| CliError::Config(format!("`{key}` descends into a non-object")))?;
        node = obj
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Default::default()));
        if node.is_null() {
            *node = Value::Object(Default::default());
        }
    }
    node.as_object_mut()
        .ok_or_else(|| CliError::Config(format!("`{key}` descends into a non-object")))?
        .insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let cfg = ExperimentConfig::default();
        let text = cfg.to_json();
        let back = ExperimentConfig::from_json(&text).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn overrides() {
        let cfg = ExperimentConfig::load(
            None,
            &[
                "training.epochs=7".into(),
                "model.iq=false".into(),
                "truth.noise_floor_db=null".into(),
                "data_dir=some/where".into(),
            ],
        )
        .unwrap();
        assert_eq!(cfg.training.epochs, 7);
        assert!(!cfg.model.iq);
        assert_eq!(cfg.truth.noise_floor_db, None);
        assert_eq!(cfg.data_dir, PathBuf::from("some/where"));
    }

    #[test]
    fn partial_file_keeps_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, r#"{"training": {"epochs": 3}, "truth": {"noise_floor_db": null}}"#).unwrap();
        let cfg = ExperimentConfig::load(Some(&path), &["training.batch_size=8".into()]).unwrap();
        assert_eq!((cfg.training.epochs, cfg.training.batch_size), (3, 8));
        assert_eq!(cfg.training.learning_rate, TrainingConfig::default().learning_rate);
        assert_eq!(cfg.truth.noise_floor_db, None);
        std::fs::write(&path, r#"{"training": {"epoch": 3}}"#).unwrap();
        assert!(ExperimentConfig::load(Some(&path), &[]).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ExperimentConfig::load(None, &["split=1.5".into()]).is_err());
        assert!(ExperimentConfig::load(None, &["nonsense=1".into()]).is_err());
        assert!(ExperimentConfig::load(None, &["training".into()]).is_err());
        assert!(ExperimentConfig::load(None, &["seed.x=1".into()]).is_err());
        assert!(ExperimentConfig::load(None, &["model.max_order=4".into()]).is_err());
    }
}
