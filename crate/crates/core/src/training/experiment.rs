use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{init_cascade, streams, train, FitReport, Problem, TrainingConfig};
use crate::error::{Error, Result};
use crate::layers::Cascade;
use crate::numerics::RngStream;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochSummary {
    pub epoch: usize,
    pub train_mean_db: f64,
    pub train_std_db: f64,
    pub test_mean_db: Option<f64>,
    pub test_std_db: Option<f64>,
}

/// Per-epoch mean and (population) standard deviation across runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiInitSummary {
    pub seeds: Vec<u64>,
    pub epochs: Vec<EpochSummary>,
    #[serde(skip)]
    pub runs: Vec<FitReport>,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

impl MultiInitSummary {
    pub fn from_runs(seeds: Vec<u64>, runs: Vec<FitReport>) -> Result<Self> {
        let n_epochs = runs
            .first()
            .map(|r| r.epochs.len())
            .ok_or_else(|| Error::InvalidConfig("no runs to summarise".into()))?;
        if runs.iter().any(|r| r.epochs.len() != n_epochs) {
            return Err(Error::DimensionMismatch("runs differ in epoch count".into()));
        }
        let epochs = (0..n_epochs)
            .map(|e| {
                let train: Vec<f64> = runs.iter().map(|r| r.epochs[e].train_db).collect();
                let test: Option<Vec<f64>> = runs.iter().map(|r| r.epochs[e].test_db).collect();
                let (train_mean_db, train_std_db) = mean_std(&train);
                let test_stats = test.map(|t| mean_std(&t));
                EpochSummary {
                    epoch: e + 1,
                    train_mean_db,
                    train_std_db,
                    test_mean_db: test_stats.map(|s| s.0),
                    test_std_db: test_stats.map(|s| s.1),
                }
            })
            .collect();
        Ok(Self { seeds, epochs, runs })
    }

    pub fn final_epoch(&self) -> &EpochSummary {
        self.epochs.last().expect("summaries have at least one epoch")
    }

    /// `epoch,train_mean_db,train_std_db,test_mean_db,test_std_db` rows.
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut out = String::from("epoch,train_mean_db,train_std_db,test_mean_db,test_std_db\n");
        for e in &self.epochs {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                e.epoch,
                e.train_mean_db,
                e.train_std_db,
                opt(e.test_mean_db),
                opt(e.test_std_db)
            ));
        }
        out
    }
}

fn single_run<F>(build: &F, problem: &Problem, config: &TrainingConfig, seed: u64) -> Result<FitReport>
where
    F: Fn() -> Result<Cascade>,
{
    let mut model = build()?;
    let mut rng = RngStream::new(seed, streams::INIT);
    init_cascade(&mut model, problem.train_input(), &mut rng, config.init_scheme)?;
    let cfg = TrainingConfig {
        seed,
        ..config.clone()
    };
    train(&mut model, problem, &cfg)
}

/// One independent training run per seed, on up to `jobs` threads. Results
/// come back in seed order regardless of scheduling.
pub fn run_inits<F>(
    build: F,
    problem: &Problem,
    config: &TrainingConfig,
    seeds: &[u64],
    jobs: usize,
) -> Result<Vec<Result<FitReport>>>
where
    F: Fn() -> Result<Cascade> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    Ok(pool.install(|| {
        seeds
            .par_iter()
            .map(|&seed| single_run(&build, problem, config, seed))
            .collect()
    }))
}

/// Runs every seed and summarises; the first failing run (by index) aborts
/// with [`Error::RunFailed`].
pub fn run_multi_init<F>(
    build: F,
    problem: &Problem,
    config: &TrainingConfig,
    seeds: &[u64],
    jobs: usize,
) -> Result<MultiInitSummary>
where
    F: Fn() -> Result<Cascade> + Sync,
{
    if seeds.is_empty() {
        return Err(Error::InvalidConfig("at least one initialisation required".into()));
    }
    let runs = run_inits(build, problem, config, seeds, jobs)?
        .into_iter()
        .enumerate()
        .map(|(run, r)| r.map_err(|e| Error::RunFailed { run, source: Box::new(e) }))
        .collect::<Result<Vec<_>>>()?;
    MultiInitSummary::from_runs(seeds.to_vec(), runs)
}

/// Ranges explored by [`random_search`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    pub learning_rate_min: f64,
    pub learning_rate_max: f64,
    pub batch_sizes: Vec<usize>,
}

impl Default for SearchSpace {
    fn default() -> Self {
        Self {
            learning_rate_min: 1e-4,
            learning_rate_max: 1.0,
            batch_sizes: vec![8, 32, 128, 512],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trial {
    pub config: TrainingConfig,
    /// validation cancellation in dB; `-inf` for diverged runs
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub best: TrainingConfig,
    pub best_score: f64,
    pub trials: Vec<Trial>,
}

/// Samples `budget` configurations (learning rate log-uniform, batch size
/// uniform over the discrete set) around `base` and keeps the one with the
/// highest score. Diverging trials score `-inf`; other errors abort.
pub fn random_search<F>(
    space: &SearchSpace,
    budget: usize,
    base: &TrainingConfig,
    seed: u64,
    mut eval: F,
) -> Result<SearchResult>
where
    F: FnMut(&TrainingConfig) -> Result<f64>,
{
    if budget == 0 {
        return Err(Error::InvalidConfig("search budget must be >= 1".into()));
    }
    if space.batch_sizes.is_empty()
        || !(space.learning_rate_min > 0.0 && space.learning_rate_min <= space.learning_rate_max)
    {
        return Err(Error::InvalidConfig("empty search space".into()));
    }
    let mut rng = RngStream::new(seed, streams::SEARCH);
    let (lo, hi) = (space.learning_rate_min.ln(), space.learning_rate_max.ln());
    let mut trials = Vec::with_capacity(budget);
    for _ in 0..budget {
        let learning_rate = (lo + (hi - lo) * rng.uniform()).exp();
        let batch_size = space.batch_sizes[rng.below(space.batch_sizes.len())];
        let config = TrainingConfig {
            learning_rate,
            batch_size,
            ..base.clone()
        };
        let score = match eval(&config) {
            Ok(s) if s.is_nan() => f64::NEG_INFINITY,
            Ok(s) => s,
            Err(e) if e.is_divergence() => f64::NEG_INFINITY,
            Err(e) => return Err(e),
        };
        trials.push(Trial { config, score });
    }
    let best = trials
        .iter()
        .fold(&trials[0], |b, t| if t.score > b.score { t } else { b })
        .clone();
    Ok(SearchResult {
        best: best.config,
        best_score: best.score,
        trials,
    })
}
