//! One-dimensional harmonic-analysis operators on sampled functions.
//!
//! Everything operates on piecewise-constant functions over explicit grids
//! ([`grid::SampledFunction`]): integrals, averages and level sets of sampled
//! data are evaluated in closed form, so grid resolution is the only error
//! source. On top of that carrier the crate provides
//!
//! * maximal operators and their Orlicz (Luxemburg-norm) variants
//!   ([`maximal`]),
//! * the Hilbert transform, its commutator with a symbol, and the
//!   contour-integral representation of the commutator ([`singular`]),
//! * dyadic lattices, sparse/Carleson families and sparse operators
//!   ([`dyadic`]),
//! * power weights, conjugated maximal operators and weak-type estimators
//!   ([`weights`]),
//! * the Rubio de Francia iteration ([`rdf`]).
//!
//! The scalar type is generic over [`Real`] (`f32` or `f64`); the aliases at
//! the crate root pin `f64`, which is what the experiment drivers use.

// `!(x > c)` guards reject NaN along with the out-of-range values; index
// loops mirror the prefix-sum arithmetic they implement.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod dyadic;
pub mod error;
pub mod fixtures;
pub mod grid;
pub mod maximal;
pub mod quad;
pub mod rdf;
pub mod singular;
pub mod weights;

pub(crate) mod util;

pub use error::{Error, Result};
pub use grid::{Grid, Interval, LevelSetCurve, SampledFunction, Spacing};

use std::fmt::{Debug, Display};

/// Floating-point scalar the library is generic over.
pub trait Real:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant into `Self`.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("constant not representable in scalar type")
    }

    /// Views the scalar as `f64` (for formatting and reports).
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("count not representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type Interval64 = Interval<f64>;
pub type Grid64 = Grid<f64>;
pub type SampledFunction64 = SampledFunction<f64>;
pub type LevelSetCurve64 = LevelSetCurve<f64>;
pub type DyadicCube64 = dyadic::DyadicCube<f64>;
pub type SparseFamily64 = dyadic::SparseFamily<f64>;
pub type OrliczGauge64 = maximal::OrliczGauge<f64>;
pub type Symbol64 = singular::Symbol<f64>;
pub type PowerWeight64 = weights::PowerWeight<f64>;
