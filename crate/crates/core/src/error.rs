//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("evaluator returned a non-finite value at x = {x:e}")]
    NonFinite { x: f64 },

    #[error("invalid interval: lo = {lo}, hi = {hi}")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "quadrature did not converge: estimate {estimate:e}, error bound {bound:e} > tol {tol:e}"
    )]
    QuadratureNonConvergence { estimate: f64, bound: f64, tol: f64 },

    #[error("sampled functions live on different grids")]
    GridMismatch,

    #[error("lattice depth {depth} exceeds the maximum of {max}")]
    DepthLimit { depth: u32, max: u32 },

    #[error("|x|^{exponent} is non-integrable at the origin (requires exponent > -1)")]
    NonIntegrable { exponent: f64 },

    #[error("weight vanishes or is non-finite on a cell at x = {x:e}")]
    ZeroWeightCell { x: f64 },

    #[error("exp({exponent:.3}) would overflow; reduce eps")]
    ConjugationOverflow { exponent: f64 },

    #[error("symbol has a non-removable singularity at x = {x:e} inside the support")]
    SingularSymbol { x: f64 },

    #[error("cube (generation {generation}, index {index}) lies outside the sampled domain")]
    CubeOutsideDomain { generation: u32, index: u64 },

    #[error("nonnegative input required (min value = {min:e})")]
    NegativeInput { min: f64 },
}
