//! Optimisation of unfolded cascades: MSE cost, plain gradient descent,
//! FTRL-Proximal, data normalisation, variance-preserving initialisation and
//! the multi-initialisation and hyperparameter-search drivers.

mod cost;
mod experiment;
mod gradcheck;
mod init;
mod normalize;
mod optim;
mod trainer;

pub use cost::{cost_adjoint, mse_cost};
pub use experiment::{
    random_search, run_inits, run_multi_init, EpochSummary, MultiInitSummary, SearchResult,
    SearchSpace, Trial,
};
pub use gradcheck::{compare_input_gradients, compare_param_gradients, GradientComparison};
pub use init::init_cascade;
pub use normalize::{Normalizer, Problem};
pub use optim::{ftrl_step, gd_step, FtrlState};
pub use trainer::{
    train, EpochRecord, FitReport, InitScheme, OptimizerKind, TrainingConfig, DIVERGENCE_FACTOR,
    FIT_REPORT_SCHEMA_VERSION,
};

/// Stream ids used to derive independent random sequences from one seed.
pub mod streams {
    pub const INIT: u64 = 1;
    pub const SHUFFLE: u64 = 2;
    pub const SEARCH: u64 = 3;
}
