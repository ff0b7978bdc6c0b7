//! Synthetic full-duplex data: OFDM/QPSK transmit signals passed through a
//! known impairment chain (IQ imbalance, PA memory polynomial, SI channel,
//! passive suppression, receiver noise).

mod io;
mod manifest;
mod ofdm;
mod truth;

pub use io::{
    decode_signal, encode_signal, parse_signal_csv, read_signal, read_signal_binary,
    read_signal_csv, signal_to_csv, write_signal, write_signal_binary, write_signal_csv,
    SIGNAL_FORMAT_VERSION, SIGNAL_MAGIC,
};
pub use manifest::{sha256_hex, DatasetManifest, DATASET_FORMAT, DATASET_FORMAT_VERSION};
pub use ofdm::{generate_ofdm, generate_ofdm_with_symbols, qpsk_point, OfdmConfig};
pub use truth::{apply_ground_truth, GroundTruth};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ComplexSignal, RngStream};

/// RNG stream ids used by [`generate_dataset`].
pub mod streams {
    pub const OFDM: u64 = 10;
    pub const GROUND_TRUTH: u64 = 11;
    pub const NOISE: u64 = 12;
}

/// Transmitted baseband `x` and received self-interference `y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub x: ComplexSignal,
    pub y: ComplexSignal,
    /// fraction of samples used for training
    pub split: f64,
}

/// Time-ordered train/test halves of a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitDataset {
    pub train_x: ComplexSignal,
    pub train_y: ComplexSignal,
    pub test_x: ComplexSignal,
    pub test_y: ComplexSignal,
}

impl Dataset {
    pub fn new(x: ComplexSignal, y: ComplexSignal, split: f64) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch(format!(
                "x has {} samples, y has {}",
                x.len(),
                y.len()
            )));
        }
        check_fraction(split)?;
        Ok(Self { x, y, split })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn split(&self, min_len: usize) -> Result<SplitDataset> {
        split_dataset(&self.x, &self.y, self.split, min_len)
    }
}

fn check_fraction(fraction: f64) -> Result<()> {
    if fraction > 0.0 && fraction < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "split fraction must lie in (0, 1), got {fraction}"
        )))
    }
}

/// Prefix/suffix split at `round(fraction * len)`. Either side shorter than
/// `min_len` (typically the model memory) is a degenerate split.
pub fn split_dataset(
    x: &ComplexSignal,
    y: &ComplexSignal,
    fraction: f64,
    min_len: usize,
) -> Result<SplitDataset> {
    check_fraction(fraction)?;
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch(format!(
            "x has {} samples, y has {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    let cut = (n as f64 * fraction).round() as usize;
    let min_len = min_len.max(1);
    if cut < min_len || n - cut < min_len {
        return Err(Error::DegenerateSplit(format!(
            "{n} samples split at {cut}; each side needs at least {min_len}"
        )));
    }
    Ok(SplitDataset {
        train_x: x.slice(0, cut),
        train_y: y.slice(0, cut),
        test_x: x.slice(cut, n),
        test_y: y.slice(cut, n),
    })
}

/// OFDM signal plus ground-truth chain, all derived from one seed. When
/// `truth` is `None` the default ground truth is sampled from the seed.
pub fn generate_dataset(
    ofdm: &OfdmConfig,
    truth: Option<&GroundTruth>,
    seed: u64,
    split: f64,
) -> Result<(Dataset, GroundTruth)> {
    let truth = match truth {
        Some(t) => t.clone(),
        None => GroundTruth::sample(&mut RngStream::new(seed, streams::GROUND_TRUTH))?,
    };
    truth.validate()?;
    let x = generate_ofdm(ofdm, &mut RngStream::new(seed, streams::OFDM))?;
    let y = apply_ground_truth(&x, &truth, &mut RngStream::new(seed, streams::NOISE))?;
    Ok((Dataset::new(x, y, split)?, truth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn ramp(n: usize) -> ComplexSignal {
        let s = (0..n).map(|i| Complex64::new(i as f64, 0.0)).collect();
        ComplexSignal::new(s, 1.0).unwrap()
    }

    #[test]
    fn split_arithmetic() {
        let x = ramp(20_480);
        let s = split_dataset(&x, &x, 0.9, 13).unwrap();
        assert_eq!((s.train_x.len(), s.test_x.len()), (18_432, 2_048));
        let x = ramp(10);
        let s = split_dataset(&x, &x, 0.5, 1).unwrap();
        assert_eq!((s.train_x.len(), s.test_x.len()), (5, 5));
        let mut joined = s.train_x.samples.clone();
        joined.extend_from_slice(&s.test_x.samples);
        assert_eq!(joined, x.samples);
    }

    #[test]
    fn degenerate_split() {
        let x = ramp(20);
        assert!(matches!(
            split_dataset(&x, &x, 0.9, 5),
            Err(Error::DegenerateSplit(_))
        ));
        assert!(split_dataset(&x, &x, 1.0, 1).is_err());
    }
}
