use std::path::Path;

use rfunfold::datagen::{
    encode_signal, generate_dataset, sha256_hex, signal_to_csv, DatasetManifest, DATASET_FORMAT,
    DATASET_FORMAT_VERSION,
};
use rfunfold::ComplexSignal;

use super::{timing_json, Artifacts, CONFIG_FILE, MANIFEST_FILE, TIMING_FILE};
use crate::config::{ExperimentConfig, SignalFormat};
use crate::error::CliResult;

fn encode(signal: &ComplexSignal, format: SignalFormat) -> Vec<u8> {
    match format {
        SignalFormat::Bin => encode_signal(signal),
        SignalFormat::Csv => signal_to_csv(signal).into_bytes(),
    }
}

/// Writes `x`, `y`, the manifest and the resolved config to `out`.
pub fn generate(cfg: &ExperimentConfig, out: &Path) -> CliResult<()> {
    let started = std::time::Instant::now();
    let truth = cfg.truth.resolve(cfg.seed)?;
    let (data, truth) = generate_dataset(&cfg.ofdm, Some(&truth), cfg.seed, cfg.split)?;
    let ext = cfg.signal_format.extension();
    let (x_file, y_file) = (format!("x.{ext}"), format!("y.{ext}"));
    let x_bytes = encode(&data.x, cfg.signal_format);
    let y_bytes = encode(&data.y, cfg.signal_format);
    let manifest = DatasetManifest {
        format: DATASET_FORMAT.to_string(),
        format_version: DATASET_FORMAT_VERSION,
        seed: cfg.seed,
        ofdm: cfg.ofdm.clone(),
        split: cfg.split,
        n_samples: data.len(),
        x_file: x_file.clone(),
        y_file: y_file.clone(),
        x_sha256: sha256_hex(&x_bytes),
        y_sha256: sha256_hex(&y_bytes),
        ground_truth: Some(truth),
    };

    let mut files = Artifacts::default();
    files.add(x_file, x_bytes);
    files.add(y_file, y_bytes);
    files.add(MANIFEST_FILE, manifest.to_json() + "\n");
    files.add(CONFIG_FILE, cfg.to_json());
    files.add(TIMING_FILE, timing_json("generate", started));
    files.write(out)?;
    println!(
        "generated {} samples (seed {}) into {}",
        manifest.n_samples,
        cfg.seed,
        out.display()
    );
    Ok(())
}
