//! Decay-model fitting for level-set curves: `μ(t) ≈ C exp(-c t^s)` with
//! `s` free (stretched) or pinned to 1 (exponential). Fitting is least
//! squares in `log μ`, with `C` profiled out by the inner linear solve; only
//! resolved points (measures above the curve's resolution floor) enter.

use czlab_core::LevelSetCurve64;
use serde::Serialize;

use crate::{ExperimentError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecayModel {
    Exp,
    Stretched,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayFit {
    /// `C` in `μ(t) = C exp(-c t^s)`.
    pub amplitude: f64,
    /// `c`.
    pub rate: f64,
    /// `s` (1 for the exponential model).
    pub exponent: f64,
    /// `(t_min, t_max)` of the points used.
    pub window: (f64, f64),
    /// Root-mean-square residual in `log μ`.
    pub residual: f64,
}

/// Least-squares regression of `y` on `(1, x)`; returns (intercept, slope,
/// rss).
fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        sx += a;
        sy += b;
        sxx += a * a;
        sxy += a * b;
    }
    let denom = n * sxx - sx * sx;
    let slope = if denom == 0.0 { 0.0 } else { (n * sxy - sx * sy) / denom };
    let intercept = (sy - slope * sx) / n;
    let rss: f64 = x
        .iter()
        .zip(y)
        .map(|(&a, &b)| (intercept + slope * a - b).powi(2))
        .sum();
    (intercept, slope, rss)
}

fn rss_at(s: f64, ts: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let xs: Vec<f64> = ts.iter().map(|t| t.powf(s)).collect();
    let (a, b, rss) = linear_fit(&xs, ys);
    (rss, a, b)
}

pub fn fit_decay(curve: &LevelSetCurve64, model: DecayModel) -> Result<DecayFit> {
    let pts: Vec<(f64, f64)> = curve
        .resolved()
        .into_iter()
        .filter(|&(_, mu)| mu > 0.0)
        .collect();
    if pts.len() < 8 {
        return Err(ExperimentError::Fit(format!(
            "need at least 8 resolved points, have {}",
            pts.len()
        )));
    }
    let ts: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let (s, intercept, slope, rss) = match model {
        DecayModel::Exp => {
            let (rss, a, b) = rss_at(1.0, &ts, &ys);
            (1.0, a, b, rss)
        }
        DecayModel::Stretched => {
            // coarse scan then ternary refinement of the profiled RSS
            let mut best = (f64::INFINITY, 0.0, 0.0, 0.0);
            let mut s = 0.05;
            while s <= 3.0 {
                let (rss, a, b) = rss_at(s, &ts, &ys);
                if rss < best.0 {
                    best = (rss, s, a, b);
                }
                s += 0.0125;
            }
            let (mut lo, mut hi) = (best.1 - 0.0125, best.1 + 0.0125);
            for _ in 0..70 {
                let m1 = lo + (hi - lo) / 3.0;
                let m2 = hi - (hi - lo) / 3.0;
                if rss_at(m1, &ts, &ys).0 <= rss_at(m2, &ts, &ys).0 {
                    hi = m2;
                } else {
                    lo = m1;
                }
            }
            let s = 0.5 * (lo + hi);
            let (rss, a, b) = rss_at(s, &ts, &ys);
            (s, a, b, rss)
        }
    };
    let rate = -slope;
    let span = ts.last().expect("nonempty").powf(s) - ts[0].powf(s);
    if !(rate > 0.0) || rate * span < 1e-9 {
        return Err(ExperimentError::Fit(
            "degenerate curve: no decay across the fit window".into(),
        ));
    }
    Ok(DecayFit {
        amplitude: intercept.exp(),
        rate,
        exponent: s,
        window: (ts[0], *ts.last().expect("nonempty")),
        residual: (rss / ts.len() as f64).sqrt(),
    })
}
