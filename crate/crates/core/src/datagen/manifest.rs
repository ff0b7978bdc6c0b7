use serde::{Deserialize, Serialize};

use super::{GroundTruth, OfdmConfig};
use crate::error::{Error, Result};

pub const DATASET_FORMAT: &str = "rfunfold-dataset";
pub const DATASET_FORMAT_VERSION: u32 = 1;

/// JSON record written next to generated signal files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetManifest {
    pub format: String,
    pub format_version: u32,
    pub seed: u64,
    pub ofdm: OfdmConfig,
    pub split: f64,
    pub n_samples: usize,
    pub x_file: String,
    pub y_file: String,
    /// hex SHA-256 of the signal files
    pub x_sha256: String,
    pub y_sha256: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ground_truth: Option<GroundTruth>,
}

impl DatasetManifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: Self = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        if m.format != DATASET_FORMAT || m.format_version != DATASET_FORMAT_VERSION {
            return Err(Error::Format(format!(
                "expected {DATASET_FORMAT} v{DATASET_FORMAT_VERSION}, found {} v{}",
                m.format, m.format_version
            )));
        }
        m.ofdm.validate()?;
        if !(m.split > 0.0 && m.split < 1.0) {
            return Err(Error::Format(format!("split {} outside (0, 1)", m.split)));
        }
        if let Some(gt) = &m.ground_truth {
            gt.validate()?;
        }
        Ok(m)
    }
}

/// Hex SHA-256 of a byte buffer, as recorded in manifests.
pub fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(bytes))
}
