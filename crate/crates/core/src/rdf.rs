//! Rubio de Francia iteration `R g = Σ_k M^k g / N^k` and the maximal-norm
//! bound `N_q` it is normalized by.
//!
//! The series is truncated at a finite order with a geometric-tail
//! certificate: the per-step norm ratios are recorded, and the dropped tail
//! is bounded by the last term times the geometric series of the worst
//! observed ratio. The normalizer `N_q = 2q/(q-1)` is a design bound whose
//! validity over the fixtures is asserted by the tests, not a sharp operator
//! norm.

use crate::error::{Error, Result};
use crate::grid::SampledFunction;
use crate::maximal::hl_maximal;
use crate::Real;

pub const MAX_ORDER: u32 = 40;

/// Truncated Rubio de Francia majorant and its certificates.
#[derive(Clone, Debug)]
pub struct RdfResult<T> {
    /// `Σ_{k=0}^{order} M^k g / N^k`.
    pub rg: SampledFunction<T>,
    pub order: u32,
    /// The normalizer `N_q` used.
    pub norm_bound: T,
    /// Geometric bound on the dropped tail in `L^q`: `‖T_K‖_q · r/(1-r)`
    /// with `r` the worst observed step ratio (infinite if `r >= 1`).
    pub tail_bound: T,
    /// `‖T_{k+1}‖_q / ‖T_k‖_q` for the computed terms.
    pub step_ratios: Vec<T>,
}

/// Normalizer `N_q = 2q/(q-1)`; decreasing in `q` with limit 2.
pub fn maximal_norm_bound<T: Real>(q: T) -> Result<T> {
    if !(q > T::one()) {
        return Err(Error::InvalidParameter("norm bound needs q > 1".into()));
    }
    Ok(T::of(2.0) * q / (q - T::one()))
}

pub fn rubio_de_francia<T: Real>(
    g: &SampledFunction<T>,
    q: T,
    order: u32,
) -> Result<RdfResult<T>> {
    let min = g.min_value();
    if min < T::zero() {
        return Err(Error::NegativeInput { min: min.as_f64() });
    }
    if order > MAX_ORDER {
        return Err(Error::InvalidParameter(format!(
            "truncation order {order} exceeds {MAX_ORDER}"
        )));
    }
    let n_q = maximal_norm_bound(q)?;
    let mut term = g.clone();
    let mut term_norm = term.lp_norm(q)?;
    let mut acc: Vec<T> = g.values().to_vec();
    let mut step_ratios = Vec::with_capacity(order as usize);
    for _ in 1..=order {
        let m = hl_maximal(&term, T::one())?;
        term = m.map(|v| v / n_q)?;
        let next_norm = term.lp_norm(q)?;
        step_ratios.push(if term_norm > T::zero() {
            next_norm / term_norm
        } else {
            T::zero()
        });
        term_norm = next_norm;
        for (a, v) in acc.iter_mut().zip(term.values()) {
            *a = *a + *v;
        }
    }
    let worst = step_ratios
        .iter()
        .fold(T::zero(), |a, r| if *r > a { *r } else { a });
    let tail_bound = if worst < T::one() {
        term_norm * worst / (T::one() - worst)
    } else {
        T::infinity()
    };
    Ok(RdfResult {
        rg: SampledFunction::new(g.grid().clone(), acc)?,
        order,
        norm_bound: n_q,
        tail_bound,
        step_ratios,
    })
}
