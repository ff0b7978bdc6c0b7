//! One function per subcommand. Each validates and computes everything
//! before touching `out`, so a failing command leaves no partial report.

mod complexity;
mod experiment;
mod fit;
mod generate;
mod gradcheck;

use std::path::{Path, PathBuf};
use std::time::Instant;

use rfunfold::datagen::{read_signal, sha256_hex, split_dataset, DatasetManifest};
use rfunfold::training::Problem;
use rfunfold::ComplexSignal;
use serde::Serialize;

pub use complexity::complexity;
pub use experiment::experiment;
pub use fit::{fit_wlmp, train_mbnn};
pub use generate::generate;
pub use gradcheck::{gradcheck, GroupCheck};

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};

pub const CONFIG_FILE: &str = "config.json";
pub const MANIFEST_FILE: &str = "manifest.json";
/// Wall-clock record; the only artifact that differs between identical runs.
pub const TIMING_FILE: &str = "timing.json";

/// Files collected in memory and written together at the end of a command.
#[derive(Debug, Default)]
pub(crate) struct Artifacts {
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl Artifacts {
    pub fn add(&mut self, name: impl Into<PathBuf>, bytes: impl Into<Vec<u8>>) {
        self.files.push((name.into(), bytes.into()));
    }

    pub fn write(self, out: &Path) -> CliResult<()> {
        for (name, bytes) in self.files {
            let path = out.join(name);
            if let Some(dir) = path.parent() {
                std::fs::create_dir_all(dir).map_err(|source| CliError::Output {
                    path: dir.to_path_buf(),
                    source,
                })?;
            }
            std::fs::write(&path, bytes).map_err(|source| CliError::Output { path, source })?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct Timing<'a> {
    command: &'a str,
    wall_clock_s: f64,
    finished_unix_s: u64,
}

pub(crate) fn timing_json(command: &str, started: Instant) -> String {
    let finished_unix_s = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    let t = Timing {
        command,
        wall_clock_s: started.elapsed().as_secs_f64(),
        finished_unix_s,
    };
    serde_json::to_string_pretty(&t).expect("timing serialises") + "\n"
}

pub(crate) fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serialises") + "\n"
}

fn data_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Data(format!("{}: {e}", path.display()))
}

/// Reads one signal listed in a manifest, checking its digest.
fn read_listed(dir: &Path, name: &str, sha: &str, rate: f64) -> CliResult<ComplexSignal> {
    if Path::new(name).file_name().and_then(|n| n.to_str()) != Some(name) {
        return Err(CliError::Data(format!("manifest entry `{name}` is not a plain file name")));
    }
    let path = dir.join(name);
    let bytes = std::fs::read(&path).map_err(|e| data_error(&path, e))?;
    if sha256_hex(&bytes) != sha {
        return Err(data_error(&path, "digest does not match the manifest"));
    }
    read_signal(&path, rate).map_err(|e| data_error(&path, e))
}

/// A dataset directory as written by `generate`.
pub(crate) fn load_dataset(dir: &Path) -> CliResult<(DatasetManifest, ComplexSignal, ComplexSignal)> {
    let path = dir.join(MANIFEST_FILE);
    let text = std::fs::read_to_string(&path).map_err(|e| data_error(&path, e))?;
    let manifest = DatasetManifest::from_json(&text).map_err(|e| data_error(&path, e))?;
    let rate = manifest.ofdm.sample_rate_hz;
    let x = read_listed(dir, &manifest.x_file, &manifest.x_sha256, rate)?;
    let y = read_listed(dir, &manifest.y_file, &manifest.y_sha256, rate)?;
    if x.len() != manifest.n_samples || y.len() != manifest.n_samples {
        return Err(CliError::Data(format!(
            "manifest lists {} samples, files hold {} and {}",
            manifest.n_samples,
            x.len(),
            y.len()
        )));
    }
    Ok((manifest, x, y))
}

/// Loads the configured dataset and normalises it on its training split.
/// Each side of the split must cover `min_len` samples.
pub(crate) fn load_problem(cfg: &ExperimentConfig, min_len: usize) -> CliResult<Problem> {
    let (manifest, x, y) = load_dataset(&cfg.data_dir)?;
    let s = split_dataset(&x, &y, manifest.split, min_len)?;
    Problem::from_splits(&s.train_x, &s.train_y, &s.test_x, &s.test_y, cfg.normalization.center)
        .map_err(|e| CliError::Data(e.to_string()))
}

fn fmt_db(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.2} dB"))
}
