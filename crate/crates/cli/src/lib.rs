//! Command-line front end of `rfunfold`: dataset generation, WLMP fitting,
//! model-based network training, multi-initialisation experiments, gradient
//! checks and complexity reports.
//!
//! Every command reads an [`ExperimentConfig`] (JSON, optionally patched by
//! `key.path=value` overrides), writes its artifacts under `--out` and exits
//! with the code of [`CliError::exit_code`].

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::ExperimentConfig;
pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "rfunfold", version, about = "Deep-unfolded RF impairment identification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesise an OFDM frame and its impaired self-interference.
    Generate(CommonArgs),
    /// Least-squares fit of the widely-linear memory polynomial.
    FitWlmp(CommonArgs),
    /// Train the unfolded IQ + PA network once.
    TrainMbnn(TrainArgs),
    /// Train from several initialisations and summarise per epoch.
    Experiment(TrainArgs),
    /// Compare analytic and finite-difference gradients per parameter group.
    Gradcheck(GradcheckArgs),
    /// Parameter and FLOP counts of WLMP and the unfolded networks.
    Complexity(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// JSON configuration file; defaults apply when omitted
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// replaces the configured seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// output directory
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// worker threads for multi-initialisation runs
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// `key.path=value` config overrides, applied in order
    #[arg(value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// drop the IQ layer from the unfolded model
    #[arg(long)]
    pub no_iq: bool,
}

#[derive(Debug, Clone, Args)]
pub struct GradcheckArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub no_iq: bool,
    /// perturbs one analytic gradient entry; exercises the failure path
    #[arg(long, hide = true)]
    pub corrupt_gradient: bool,
}

impl CommonArgs {
    /// Loads the configuration with `extra` overrides applied after the
    /// user's.
    pub fn load(&self, extra: &[String]) -> CliResult<ExperimentConfig> {
        let mut overrides = self.overrides.clone();
        if let Some(seed) = self.seed {
            overrides.push(format!("seed={seed}"));
        }
        overrides.extend_from_slice(extra);
        if self.jobs == 0 {
            return Err(CliError::Config("--jobs must be >= 1".into()));
        }
        ExperimentConfig::load(self.config.as_deref(), &overrides)
    }
}

fn iq_override(no_iq: bool) -> Vec<String> {
    if no_iq {
        vec!["model.iq=false".into()]
    } else {
        Vec::new()
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> CliResult<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            let _ = e.print();
            CliError::Help
        }
        _ => CliError::Config(e.to_string()),
    })?;
    match cli.command {
        Command::Generate(a) => commands::generate(&a.load(&[])?, &a.out),
        Command::FitWlmp(a) => commands::fit_wlmp(&a.load(&[])?, &a.out),
        Command::TrainMbnn(a) => {
            commands::train_mbnn(&a.common.load(&iq_override(a.no_iq))?, &a.common.out)
        }
        Command::Experiment(a) => commands::experiment(
            &a.common.load(&iq_override(a.no_iq))?,
            &a.common.out,
            a.common.jobs,
        ),
        Command::Gradcheck(a) => commands::gradcheck(
            &a.common.load(&iq_override(a.no_iq))?,
            &a.common.out,
            a.corrupt_gradient,
        ),
        Command::Complexity(a) => commands::complexity(&a.load(&[])?, &a.out),
    }
}
