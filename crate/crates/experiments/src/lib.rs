//! Named, reproducible experiments over the `czlab-core` operators, plus
//! decay fitting and report plumbing.
//!
//! Every experiment is a pure function of its [`runs::Params`]: curves and
//! summaries are byte-identical across runs with the same parameters. Wall
//! times are printed but never serialized.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod fit;
pub mod profile;
pub mod report;
pub mod runs;

pub use fit::{fit_decay, DecayFit, DecayModel};
pub use report::{Clause, CurveData, ExperimentReport, FitSummary, Summary};
pub use runs::{run, run_all, Params, EXPERIMENT_NAMES};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Core(#[from] czlab_core::Error),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("unknown experiment `{name}`; valid names: {valid}")]
    UnknownExperiment { name: String, valid: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, ExperimentError>;
