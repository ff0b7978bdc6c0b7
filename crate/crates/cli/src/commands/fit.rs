use std::path::Path;
use std::time::Instant;

use rfunfold::estimation::fit_wlmp as ls_fit;
use rfunfold::layers::{flops, Block, Model, ModelDocument};
use rfunfold::training::{
    random_search, run_inits, EpochRecord, FitReport, Problem, SearchResult, TrainingConfig,
    FIT_REPORT_SCHEMA_VERSION,
};

use super::{fmt_db, load_problem, timing_json, to_json, Artifacts, CONFIG_FILE, TIMING_FILE};
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};

pub const REPORT_FILE: &str = "report.json";
pub const EPOCHS_FILE: &str = "epochs.csv";
pub const MODEL_FILE: &str = "model.json";
pub const SEARCH_FILE: &str = "search.json";

fn print_summary(name: &str, report: &FitReport) {
    println!("model      {name}");
    println!("train      {:.2} dB", report.final_train_db());
    println!("test       {}", fmt_db(report.final_test_db()));
    println!("params     {}", report.param_count);
    println!("flops      {} per sample", report.flop_count);
}

/// Least-squares WLMP fit on the training split. The report holds a single
/// epoch record for the one-shot solve.
pub fn fit_wlmp(cfg: &ExperimentConfig, out: &Path) -> CliResult<()> {
    let started = Instant::now();
    let spec = &cfg.wlmp;
    let problem = load_problem(cfg, spec.memory)?;
    let n = problem.n_train;
    let model = ls_fit(&problem.x[..n], &problem.t[..n], spec.max_order, spec.memory)
        .map_err(|e| CliError::Data(e.to_string()))?;
    let (train, test) = problem.evaluate(&model)?;
    let config = TrainingConfig {
        epochs: 1,
        seed: cfg.seed,
        ..cfg.training.clone()
    };
    let report = FitReport {
        schema_version: FIT_REPORT_SCHEMA_VERSION,
        model_kind: model.kind().to_string(),
        config_fingerprint: config.fingerprint(),
        config,
        epochs: vec![EpochRecord {
            epoch: 1,
            train_db: train.c_db,
            test_db: test.map(|c| c.c_db),
        }],
        final_params: model.params(),
        param_count: model.param_count(),
        flop_count: model.flop_count(),
        flop_convention: flops::CONVENTION.to_string(),
        wall_clock_s: 0.0,
    };

    let mut files = Artifacts::default();
    files.add(REPORT_FILE, report.to_json() + "\n");
    files.add(EPOCHS_FILE, report.epochs_csv());
    files.add(MODEL_FILE, ModelDocument::new(Model::Wlmp(model)).to_json() + "\n");
    files.add(CONFIG_FILE, cfg.to_json());
    files.add(TIMING_FILE, timing_json("fit-wlmp", started));
    files.write(out)?;
    print_summary(&format!("wlmp P={} M={}", spec.max_order, spec.memory), &report);
    Ok(())
}

/// Random search on a train/validation re-split of the training data when a
/// budget is configured, otherwise the configured hyperparameters.
pub(crate) fn resolve_training(
    cfg: &ExperimentConfig,
    problem: &Problem,
) -> CliResult<(TrainingConfig, Option<SearchResult>)> {
    let base = TrainingConfig {
        seed: cfg.seed,
        ..cfg.training.clone()
    };
    if cfg.search.budget == 0 {
        return Ok((base, None));
    }
    let validation = problem.validation_split(cfg.search.fit_fraction)?;
    let build = || cfg.model.build();
    let result = random_search(&cfg.search.space, cfg.search.budget, &base, cfg.seed, |c| {
        let report = run_inits(build, &validation, c, &[cfg.seed], 1)?
            .pop()
            .expect("one seed gives one run")?;
        Ok(report.final_test_db().unwrap_or(f64::NEG_INFINITY))
    })?;
    if result.best_score == f64::NEG_INFINITY {
        return Err(CliError::Divergence("every search trial diverged".into()));
    }
    Ok((result.best.clone(), Some(result)))
}

pub(crate) fn model_label(cfg: &ExperimentConfig) -> String {
    let iq = if cfg.model.iq { "with IQ" } else { "without IQ" };
    format!("mbnn P={} M={} {iq}", cfg.model.max_order, cfg.model.memory)
}

/// One training run of the unfolded network from seed `cfg.seed`.
pub fn train_mbnn(cfg: &ExperimentConfig, out: &Path) -> CliResult<()> {
    let started = Instant::now();
    let build = || cfg.model.build();
    let problem = load_problem(cfg, build()?.memory())?;
    let (training, search) = resolve_training(cfg, &problem)?;
    let report = run_inits(build, &problem, &training, &[cfg.seed], 1)?
        .pop()
        .expect("one seed gives one run")?;
    let mut model = build()?;
    model.set_params(&report.final_params)?;

    let mut files = Artifacts::default();
    files.add(REPORT_FILE, report.to_json() + "\n");
    files.add(EPOCHS_FILE, report.epochs_csv());
    files.add(MODEL_FILE, ModelDocument::new(Model::Cascade(model)).to_json() + "\n");
    if let Some(s) = &search {
        files.add(SEARCH_FILE, to_json(s));
    }
    files.add(CONFIG_FILE, cfg.to_json());
    files.add(TIMING_FILE, timing_json("train-mbnn", started));
    files.write(out)?;
    if search.is_some() {
        println!(
            "searched   lr {:.4e}, batch {}",
            training.learning_rate, training.batch_size
        );
    }
    print_summary(&model_label(cfg), &report);
    Ok(())
}
