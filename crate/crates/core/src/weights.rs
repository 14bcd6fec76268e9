//! Power weights `|x|^a` with closed-form interval integrals, A_p / A_1
//! constant estimation over interval schedules, the conjugated operator
//! `w · M(f/w)`, weak-(1,1) and `L log L` failure estimators, and the
//! Muckenhoupt–Wheeden necessary-condition check.
//!
//! Everything in this module that can diverge is certified analytically
//! (closed-form integrals and infima), never as quadrature overflow, and
//! divergence is reported as growth under a refinement schedule plus a
//! flag — no sentinel infinities.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{Grid, Interval, SampledFunction};
use crate::maximal::hl_maximal;
use crate::Real;

/// The weight `w(x) = |x|^a`, optionally carrying the `(δ, p)` pair it was
/// derived from via `a = δ(p-1)`; then `β = 1 + δ(1-p) = 1 - a`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PowerWeight<T> {
    a: T,
    delta_p: Option<(T, T)>,
}

impl<T: Real> PowerWeight<T> {
    pub fn new(a: T) -> Self {
        Self { a, delta_p: None }
    }

    /// The fixture family `w(x) = |x|^{-δ(1-p)}`; requires `p > 1` and
    /// `δ ∈ (0, min(1, 1/(p-1)))`, which places `a` and `β` in `(0, 1)`.
    pub fn from_delta_p(delta: T, p: T) -> Result<Self> {
        if !(p > T::one()) {
            return Err(Error::InvalidParameter("p must exceed 1".into()));
        }
        let cap = T::one().min((p - T::one()).recip());
        if !(delta > T::zero() && delta < cap) {
            return Err(Error::InvalidParameter(
                "delta must lie in (0, min(1, 1/(p-1)))".into(),
            ));
        }
        Ok(Self { a: delta * (p - T::one()), delta_p: Some((delta, p)) })
    }

    pub fn exponent(&self) -> T {
        self.a
    }

    pub fn delta_p(&self) -> Option<(T, T)> {
        self.delta_p
    }

    /// `β = 1 - a`.
    pub fn beta(&self) -> T {
        T::one() - self.a
    }

    pub fn eval(&self, x: T) -> T {
        if self.a == T::zero() {
            T::one()
        } else {
            x.abs().powf(self.a)
        }
    }

    /// Closed-form `∫_I |x|^a dx`; integrability at the origin requires
    /// `a > -1` whenever `I` touches or straddles it.
    pub fn integral(&self, i: &Interval<T>) -> Result<T> {
        let a = self.a;
        // one-sided primitive on [0, c]
        let onesided = |c: T| -> Result<T> {
            if c == T::zero() {
                return Ok(T::zero());
            }
            if a <= -T::one() {
                return Err(Error::NonIntegrable { exponent: a.as_f64() });
            }
            Ok(c.powf(a + T::one()) / (a + T::one()))
        };
        let (lo, hi) = (i.lo(), i.hi());
        if lo >= T::zero() {
            if lo == T::zero() {
                return onesided(hi);
            }
            if a == -T::one() {
                return Ok((hi / lo).ln());
            }
            return Ok((hi.powf(a + T::one()) - lo.powf(a + T::one())) / (a + T::one()));
        }
        if hi <= T::zero() {
            let flipped = Interval::new(-hi, -lo)?;
            return self.integral(&flipped);
        }
        Ok(onesided(-lo)? + onesided(hi)?)
    }

    pub fn average(&self, i: &Interval<T>) -> Result<T> {
        Ok(self.integral(i)? / i.length())
    }

    /// Essential infimum over `I`, in closed form: for `a > 0` it is
    /// `dist(I, 0)^a` (zero when `I` touches the origin), for `a < 0` it is
    /// `max(|lo|, |hi|)^a`, and `1` for `a = 0`.
    pub fn essinf(&self, i: &Interval<T>) -> T {
        if self.a == T::zero() {
            return T::one();
        }
        let (lo, hi) = (i.lo(), i.hi());
        if self.a > T::zero() {
            let dist = if lo > T::zero() {
                lo
            } else if hi < T::zero() {
                -hi
            } else {
                T::zero()
            };
            if dist == T::zero() {
                T::zero()
            } else {
                dist.powf(self.a)
            }
        } else {
            let m = lo.abs().max(hi.abs());
            m.powf(self.a)
        }
    }
}

/// `max_I ⟨w⟩_I ⟨w^{1-p'}⟩_I^{p-1}` over the supplied intervals, in closed
/// form. Intervals on which the dual-exponent integral diverges are
/// rejected with the offending exponent.
pub fn ap_constant<T: Real>(
    w: &PowerWeight<T>,
    p: T,
    intervals: &[Interval<T>],
) -> Result<T> {
    if !(p > T::one()) {
        return Err(Error::InvalidParameter("A_p needs p > 1".into()));
    }
    if intervals.is_empty() {
        return Err(Error::InvalidParameter("A_p needs at least one interval".into()));
    }
    let p_prime = p / (p - T::one());
    let dual = PowerWeight::new(w.exponent() * (T::one() - p_prime));
    let mut best = T::zero();
    for i in intervals {
        let v = w.average(i)? * dual.average(i)?.powf(p - T::one());
        if v > best {
            best = v;
        }
    }
    Ok(best)
}

/// A_1 estimation along a refinement schedule.
#[derive(Clone, Debug, Serialize)]
pub struct A1Report<T> {
    /// Largest finite ratio `⟨w⟩_I / essinf_I w` observed.
    pub max_finite: T,
    /// Set when some interval has positive mean and zero infimum (analytic
    /// divergence), or when the per-level values grow by a factor >= 1.5
    /// for three consecutive levels.
    pub divergent: bool,
    /// Largest finite ratio per schedule level.
    pub per_level: Vec<T>,
    /// Log-slope of the per-level values when they keep growing.
    pub growth: Option<T>,
}

/// `sup_I ⟨w⟩_I / essinf_I w` over a schedule of interval levels.
pub fn a1_constant<T: Real>(w: &PowerWeight<T>, schedule: &[Vec<Interval<T>>]) -> A1Report<T> {
    let mut per_level = Vec::with_capacity(schedule.len());
    let mut divergent = false;
    let mut max_finite = T::zero();
    for level in schedule {
        let mut level_best = T::zero();
        for i in level {
            let mean = match w.average(i) {
                Ok(m) => m,
                Err(_) => {
                    divergent = true;
                    continue;
                }
            };
            let inf = w.essinf(i);
            if inf == T::zero() {
                if mean > T::zero() {
                    divergent = true;
                }
                continue;
            }
            let ratio = mean / inf;
            if ratio > level_best {
                level_best = ratio;
            }
        }
        if level_best > max_finite {
            max_finite = level_best;
        }
        per_level.push(level_best);
    }
    // growth-rate rule: three consecutive jumps by >= 1.5
    let mut consecutive = 0;
    for pair in per_level.windows(2) {
        if pair[0] > T::zero() && pair[1] >= T::of(1.5) * pair[0] {
            consecutive += 1;
            if consecutive >= 3 {
                divergent = true;
            }
        } else {
            consecutive = 0;
        }
    }
    let growth = fit_log_slope(&per_level);
    A1Report { max_finite, divergent, per_level, growth }
}

/// Least-squares slope of `ln v_k` against `k` over the positive entries.
fn fit_log_slope<T: Real>(values: &[T]) -> Option<T> {
    let pts: Vec<(T, T)> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v > T::zero())
        .map(|(k, v)| (T::of_usize(k), v.ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let n = T::of_usize(pts.len());
    let (mut sx, mut sy, mut sxx, mut sxy) = (T::zero(), T::zero(), T::zero(), T::zero());
    for (x, y) in &pts {
        sx = sx + *x;
        sy = sy + *y;
        sxx = sxx + *x * *x;
        sxy = sxy + *x * *y;
    }
    let denom = n * sxx - sx * sx;
    (denom != T::zero()).then(|| (n * sxy - sx * sy) / denom)
}

/// Dyadic interval schedule used for the constant estimators: level `k`
/// holds the origin-touching intervals `(0, 2^{-k})`, `(-2^{-k}, 2^{-k})`
/// and, for `k >= 1`, the origin-avoiding `(2^{-k}, 2^{-k+1})` and
/// `(2^{-k}, 1)`. This is the declared test distribution; the true suprema
/// range over all intervals.
pub fn dyadic_schedule<T: Real>(levels: u32) -> Vec<Vec<Interval<T>>> {
    let mut out = Vec::with_capacity(levels as usize);
    for k in 0..levels {
        let h = T::of(2.0f64.powi(-(k as i32)));
        let mut level = vec![
            Interval::new(T::zero(), h).expect("ordered"),
            Interval::new(-h, h).expect("ordered"),
        ];
        if k >= 1 {
            let h2 = T::of(2.0f64.powi(-(k as i32) + 1));
            level.push(Interval::new(h, h2).expect("ordered"));
            level.push(Interval::new(h, T::one()).expect("ordered"));
        }
        out.push(level);
    }
    out
}

/// The conjugated operator `w · M(f/w)`, with `f/w` formed cellwise at
/// representative points and `M` the truncated maximal operator.
pub fn conjugated_maximal<T: Real>(
    w: &PowerWeight<T>,
    f: &SampledFunction<T>,
) -> Result<SampledFunction<T>> {
    let mut quotient = Vec::with_capacity(f.n_cells());
    for i in 0..f.n_cells() {
        let x = f.rep(i);
        let wx = w.eval(x);
        if !(wx > T::zero()) || !wx.is_finite() {
            return Err(Error::ZeroWeightCell { x: x.as_f64() });
        }
        quotient.push(f.values()[i] / wx);
    }
    let m = hl_maximal(&SampledFunction::new(f.grid().clone(), quotient)?, T::one())?;
    m.map_with_x(|x, v| w.eval(x) * v)
}

/// `sup_{t in grid} t · |{ |g| > t }|` (the weak-(1,1) functional).
pub fn weak11_estimator<T: Real>(g: &SampledFunction<T>, t_grid: &[T]) -> Result<T> {
    if t_grid.is_empty() || t_grid.iter().any(|t| !(*t > T::zero())) {
        return Err(Error::InvalidParameter(
            "threshold grid must be nonempty and positive".into(),
        ));
    }
    let mut best = T::zero();
    for &t in t_grid {
        let v = t * g.level_set_measure(t);
        if v > best {
            best = v;
        }
    }
    Ok(best)
}

/// Closed-form failure ratio `t · ((1/t)^{1/β} - 1) / log(e + 1/t)^α` for
/// the conjugated fixture derived from `(δ, p)`.
pub fn llogl_failure_ratio<T: Real>(delta: T, p: T, alpha: T, t: T) -> Result<T> {
    let w = PowerWeight::from_delta_p(delta, p)?;
    let beta = w.beta();
    if !(beta > T::zero() && beta < T::one()) {
        return Err(Error::InvalidParameter("beta must lie in (0, 1)".into()));
    }
    if !(t > T::zero() && t <= T::one()) {
        return Err(Error::InvalidParameter("t must lie in (0, 1]".into()));
    }
    let bracket = t.recip().powf(beta.recip()) - T::one();
    let log_factor = (T::E() + t.recip()).ln().powf(alpha);
    Ok(t * bracket / log_factor)
}

/// Grid-based variant of [`llogl_failure_ratio`]: the level-set measure of
/// the conjugated fixture on a truncation `(0, radius)`, divided by
/// `Φ_α(1/t)`.
pub fn llogl_failure_ratio_grid<T: Real>(
    delta: T,
    p: T,
    alpha: T,
    t: T,
    radius: T,
    cells: usize,
) -> Result<T> {
    let w = PowerWeight::from_delta_p(delta, p)?;
    if !(t > T::zero() && t <= T::one()) {
        return Err(Error::InvalidParameter("t must lie in (0, 1]".into()));
    }
    let grid = Grid::log_uniform(Interval::new(T::zero(), radius)?, cells)?;
    let f = SampledFunction::sample(grid, |x| if x < T::one() { T::one() } else { T::zero() })?;
    let g = conjugated_maximal(&w, &f)?;
    let measure = g.level_set_measure(t);
    let phi = t.recip() * (T::E() + t.recip()).ln().powf(alpha);
    Ok(measure / phi)
}

#[derive(Clone, Debug, Serialize)]
pub struct MwSample<T> {
    pub x: T,
    pub quasinorm: T,
    pub weight_at_x: T,
    pub ratio: T,
}

/// Necessary-condition report: per sample `x`, the weak-(1,1) quasinorm of
/// `y ↦ w(y) χ_Q(y) / |y - x|` divided by `w(x)`.
#[derive(Clone, Debug, Serialize)]
pub struct MwReport<T> {
    pub samples: Vec<MwSample<T>>,
    pub max_ratio: T,
}

/// Muckenhoupt–Wheeden check. The kernel singularity at `y = x` is resolved
/// by building two log-uniform grids in the reflected coordinates
/// `s = |y - x|` on each side of `x` (the grid refines toward `s = 0`);
/// level-set measures are invariant under the reflection.
pub fn mw_condition_check<T: Real>(
    w: &PowerWeight<T>,
    q: &Interval<T>,
    x_samples: &[T],
    t_grid: &[T],
    cells_per_side: usize,
) -> Result<MwReport<T>> {
    if t_grid.is_empty() || t_grid.iter().any(|t| !(*t > T::zero())) {
        return Err(Error::InvalidParameter(
            "threshold grid must be nonempty and positive".into(),
        ));
    }
    let mut samples = Vec::with_capacity(x_samples.len());
    let mut max_ratio = T::zero();
    for &x in x_samples {
        if !q.contains(x) || x == T::zero() {
            return Err(Error::InvalidParameter(
                "samples must lie inside Q and away from 0".into(),
            ));
        }
        let wx = w.eval(x);
        if !(wx > T::zero()) {
            return Err(Error::ZeroWeightCell { x: x.as_f64() });
        }
        let side = |len: T, point: &dyn Fn(T) -> T| -> Result<Option<SampledFunction<T>>> {
            if len <= T::zero() {
                return Ok(None);
            }
            let grid = Grid::log_uniform(Interval::new(T::zero(), len)?, cells_per_side)?;
            Ok(Some(SampledFunction::sample(grid, |s| {
                w.eval(point(s)) / s
            })?))
        };
        let left = side(x - q.lo(), &|s| x - s)?;
        let right = side(q.hi() - x, &|s| x + s)?;
        let mut quasi = T::zero();
        for &t in t_grid {
            let mut mu = T::zero();
            if let Some(l) = &left {
                mu = mu + l.level_set_measure(t);
            }
            if let Some(r) = &right {
                mu = mu + r.level_set_measure(t);
            }
            let v = t * mu;
            if v > quasi {
                quasi = v;
            }
        }
        let ratio = quasi / wx;
        if ratio > max_ratio {
            max_ratio = ratio;
        }
        samples.push(MwSample { x, quasinorm: quasi, weight_at_x: wx, ratio });
    }
    Ok(MwReport { samples, max_ratio })
}
