use std::path::Path;
use std::time::Instant;

use rfunfold::layers::Block;
use rfunfold::training::{run_inits, EpochSummary, MultiInitSummary};
use serde::Serialize;

use super::fit::{model_label, resolve_training, SEARCH_FILE};
use super::{fmt_db, load_problem, timing_json, to_json, Artifacts, CONFIG_FILE, TIMING_FILE};
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};

pub const SUMMARY_JSON: &str = "summary.json";
pub const SUMMARY_CSV: &str = "summary.csv";

#[derive(Debug, Serialize)]
struct FailedRun {
    run: usize,
    seed: u64,
    error: String,
}

#[derive(Debug, Serialize)]
struct ExperimentSummary {
    model: String,
    n_inits: usize,
    seeds: Vec<u64>,
    completed: Vec<usize>,
    failed: Vec<FailedRun>,
    final_epoch: Option<EpochSummary>,
}

/// Seeds of the `n` initialisations: `seed, seed + 1, ...`.
pub fn init_seeds(seed: u64, n: usize) -> Vec<u64> {
    (0..n as u64).map(|i| seed.wrapping_add(i)).collect()
}

/// Trains `experiment.n_inits` initialisations on up to `jobs` threads and
/// writes per-run epoch CSVs plus the mean and standard deviation per epoch.
/// Diverged runs are listed in the summary and make the command fail after
/// the report has been written.
pub fn experiment(cfg: &ExperimentConfig, out: &Path, jobs: usize) -> CliResult<()> {
    let started = Instant::now();
    let build = || cfg.model.build();
    let problem = load_problem(cfg, build()?.memory())?;
    let (training, search) = resolve_training(cfg, &problem)?;
    let seeds = init_seeds(cfg.seed, cfg.experiment.n_inits);
    let results = run_inits(build, &problem, &training, &seeds, jobs)?;

    let mut files = Artifacts::default();
    let (mut ok_seeds, mut ok_runs, mut completed, mut failed) = (vec![], vec![], vec![], vec![]);
    for (run, (result, &seed)) in results.into_iter().zip(&seeds).enumerate() {
        match result {
            Ok(report) => {
                files.add(format!("runs/run_{run:03}.csv"), report.epochs_csv());
                ok_seeds.push(seed);
                ok_runs.push(report);
                completed.push(run);
            }
            Err(e) if e.is_divergence() => failed.push(FailedRun {
                run,
                seed,
                error: e.to_string(),
            }),
            Err(e) => return Err(e.into()),
        }
    }
    let summary = if ok_runs.is_empty() {
        None
    } else {
        Some(MultiInitSummary::from_runs(ok_seeds, ok_runs)?)
    };
    if let Some(s) = &summary {
        files.add(SUMMARY_CSV, s.to_csv());
    }
    let record = ExperimentSummary {
        model: model_label(cfg),
        n_inits: seeds.len(),
        seeds: seeds.clone(),
        completed,
        failed,
        final_epoch: summary.as_ref().map(|s| s.final_epoch().clone()),
    };
    files.add(SUMMARY_JSON, to_json(&record));
    if let Some(s) = &search {
        files.add(SEARCH_FILE, to_json(s));
    }
    files.add(CONFIG_FILE, cfg.to_json());
    files.add(TIMING_FILE, timing_json("experiment", started));
    files.write(out)?;

    println!("model      {}", record.model);
    println!(
        "runs       {} of {} completed",
        record.completed.len(),
        record.n_inits
    );
    if let Some(f) = &record.final_epoch {
        println!("train      {:.2} +/- {:.2} dB", f.train_mean_db, f.train_std_db);
        println!(
            "test       {} +/- {}",
            fmt_db(f.test_mean_db),
            fmt_db(f.test_std_db)
        );
    }
    for f in &record.failed {
        println!("diverged   run {} (seed {}): {}", f.run, f.seed, f.error);
    }
    if record.failed.is_empty() {
        Ok(())
    } else {
        let runs: Vec<String> = record.failed.iter().map(|f| f.run.to_string()).collect();
        Err(CliError::Divergence(format!("runs {} diverged", runs.join(", "))))
    }
}
