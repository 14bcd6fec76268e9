//! Uncentered Hardy–Littlewood maximal operator over cell-aligned
//! intervals, its iterates, Orlicz (Luxemburg-norm) maximal operators, the
//! Fefferman–Stein sharp maximal function, and the vector-valued extension.
//!
//! Every supremum here ranges over intervals that are unions of consecutive
//! grid cells inside the sampled domain (a truncated maximal operator), so
//! it is an exact finite maximum. Two interchangeable engines compute it: a
//! prefix-sum sweep touching all O(n^2) interval pairs, and a
//! divide-and-conquer convex-hull sweep engaged on large grids.

use crate::error::{Error, Result};
use crate::grid::{Interval, SampledFunction};
use crate::Real;

/// Grid size above which the hull sweep replaces the quadratic sweep.
const HULL_CUTOFF: usize = 2048;

/// Young function family `Φ_α(t) = t · log(e + t)^α`.
///
/// `α = 0` is the plain average, `α = 1` the `L log L` gauge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrliczGauge<T> {
    alpha: T,
}

impl<T: Real> OrliczGauge<T> {
    pub fn new(alpha: T) -> Result<Self> {
        if !(alpha >= T::zero()) || !alpha.is_finite() {
            return Err(Error::InvalidParameter("alpha must be finite and >= 0".into()));
        }
        Ok(Self { alpha })
    }

    /// The plain-average gauge `Φ_0(t) = t`.
    pub fn plain() -> Self {
        Self { alpha: T::zero() }
    }

    /// The `L log L` gauge `Φ_1(t) = t log(e + t)`.
    pub fn l_log_l() -> Self {
        Self { alpha: T::one() }
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn phi(&self, t: T) -> T {
        if t == T::zero() {
            return T::zero();
        }
        if self.alpha == T::zero() {
            return t;
        }
        t * (T::E() + t).ln().powf(self.alpha)
    }
}

fn prefix_sums<T: Real>(widths: &[T], vals: &[T]) -> (Vec<T>, Vec<T>) {
    let n = widths.len();
    let mut w = Vec::with_capacity(n + 1);
    let mut s = Vec::with_capacity(n + 1);
    w.push(T::zero());
    s.push(T::zero());
    for i in 0..n {
        w.push(w[i] + widths[i]);
        s.push(s[i] + widths[i] * vals[i]);
    }
    (w, s)
}

/// For each cell, the maximum of `(S_j - S_i)/(W_j - W_i)` over all
/// cell-aligned intervals `[i, j)` containing it. Exact maximum over the
/// full pair set; the singleton interval is seeded with the cell value
/// itself so that `M f >= |f|` holds without prefix-sum rounding.
pub(crate) fn interval_sup_averages<T: Real>(widths: &[T], vals: &[T]) -> Vec<T> {
    let n = widths.len();
    let (w, s) = prefix_sums(widths, vals);
    let mut best = vals.to_vec();
    if n > HULL_CUTOFF {
        hull_sweep(&w, &s, &mut best, 0, n);
    } else {
        quadratic_sweep(&w, &s, &mut best, 0, n);
    }
    best
}

/// All pairs `(i, j)` with `lo <= i < j <= hi`, folded into per-cell maxima
/// through a suffix-max scan; O((hi-lo)^2) total.
fn quadratic_sweep<T: Real>(w: &[T], s: &[T], best: &mut [T], lo: usize, hi: usize) {
    for i in lo..hi {
        let mut run = T::neg_infinity();
        for g in (i..hi).rev() {
            let j = g + 1;
            let slope = (s[j] - s[i]) / (w[j] - w[i]);
            if slope > run {
                run = slope;
            }
            if run > best[g] {
                best[g] = run;
            }
        }
    }
}

fn cross<T: Real>(w: &[T], s: &[T], a: usize, b: usize, c: usize) -> T {
    (w[b] - w[a]) * (s[c] - s[a]) - (s[b] - s[a]) * (w[c] - w[a])
}

fn slope<T: Real>(w: &[T], s: &[T], i: usize, j: usize) -> T {
    (s[j] - s[i]) / (w[j] - w[i])
}

/// Divide-and-conquer sweep: within-half pairs recurse; crossing pairs are
/// resolved against the convex hull of the opposite half, where the maximal
/// slope from an external point is unimodal along the hull.
fn hull_sweep<T: Real>(w: &[T], s: &[T], best: &mut [T], lo: usize, hi: usize) {
    if hi - lo <= 32 {
        quadratic_sweep(w, s, best, lo, hi);
        return;
    }
    let mid = (lo + hi) / 2;
    hull_sweep(w, s, best, lo, mid);
    hull_sweep(w, s, best, mid, hi);

    // upper hull of points mid+1..=hi, queried from the left
    let mut upper: Vec<usize> = Vec::with_capacity(hi - mid);
    for t in mid + 1..=hi {
        while upper.len() >= 2
            && cross(w, s, upper[upper.len() - 2], upper[upper.len() - 1], t) >= T::zero()
        {
            upper.pop();
        }
        upper.push(t);
    }
    let mut run = T::neg_infinity();
    for g in lo..mid {
        let t = tangent_slope(w, s, g, &upper);
        if t > run {
            run = t;
        }
        if run > best[g] {
            best[g] = run;
        }
    }

    // lower hull of points lo..=mid-1, queried from the right
    let mut lower: Vec<usize> = Vec::with_capacity(mid - lo);
    for t in lo..mid {
        while lower.len() >= 2
            && cross(w, s, lower[lower.len() - 2], lower[lower.len() - 1], t) <= T::zero()
        {
            lower.pop();
        }
        lower.push(t);
    }
    let mut run = T::neg_infinity();
    for g in (mid..hi).rev() {
        let j = g + 1;
        let t = tangent_slope(w, s, j, &lower);
        if t > run {
            run = t;
        }
        if run > best[g] {
            best[g] = run;
        }
    }
}

/// Maximum slope from point `q` to the hull (unimodal along the hull);
/// binary search on the ascent direction plus a neighbour probe.
fn tangent_slope<T: Real>(w: &[T], s: &[T], q: usize, hull: &[usize]) -> T {
    let sl = |h: usize| {
        if h > q {
            slope(w, s, q, h)
        } else {
            slope(w, s, h, q)
        }
    };
    let mut lo = 0usize;
    let mut hi = hull.len() - 1;
    while lo < hi {
        let m = (lo + hi) / 2;
        if sl(hull[m + 1]) >= sl(hull[m]) {
            lo = m + 1;
        } else {
            hi = m;
        }
    }
    let mut bestv = T::neg_infinity();
    let from = lo.saturating_sub(1);
    let to = (lo + 1).min(hull.len() - 1);
    for t in from..=to {
        let v = sl(hull[t]);
        if v > bestv {
            bestv = v;
        }
    }
    bestv
}

/// Uncentered maximal operator `M_r f = M(|f|^r)^{1/r}` over cell-aligned
/// intervals contained in the sampled domain.
pub fn hl_maximal<T: Real>(f: &SampledFunction<T>, r: T) -> Result<SampledFunction<T>> {
    if !(r >= T::one()) {
        return Err(Error::InvalidParameter("maximal exponent r must be >= 1".into()));
    }
    let widths = f.grid().widths();
    let powered: Vec<T> = if r == T::one() {
        f.values().iter().map(|v| v.abs()).collect()
    } else {
        f.values().iter().map(|v| v.abs().powf(r)).collect()
    };
    let sup = interval_sup_averages(&widths, &powered);
    let values = if r == T::one() {
        sup
    } else {
        sup.into_iter().map(|v| v.powf(r.recip())).collect()
    };
    SampledFunction::new(f.grid().clone(), values)
}

/// `M` applied `k` times.
pub fn iterated_maximal<T: Real>(f: &SampledFunction<T>, k: u32) -> Result<SampledFunction<T>> {
    if k == 0 {
        return Err(Error::InvalidParameter("iteration count must be >= 1".into()));
    }
    let mut cur = hl_maximal(f, T::one())?;
    for _ in 1..k {
        cur = hl_maximal(&cur, T::one())?;
    }
    Ok(cur)
}

/// Luxemburg norm `inf { λ > 0 : (1/|Q|) ∫_Q Φ(|f|/λ) <= 1 }`, by bisection
/// to relative tolerance 1e-10. For the plain gauge this is exactly the
/// average of `|f|` over `Q`.
pub fn luxemburg_norm<T: Real>(
    f: &SampledFunction<T>,
    q: &Interval<T>,
    gauge: &OrliczGauge<T>,
) -> Result<T> {
    if !f.domain().contains_interval(q) {
        return Err(Error::InvalidParameter(
            "Luxemburg interval escapes the sampled domain".into(),
        ));
    }
    let mut cells = Vec::new();
    for i in 0..f.n_cells() {
        let o = f.grid().cell(i).overlap(q);
        if o > T::zero() {
            let a = f.values()[i].abs();
            if a > T::zero() {
                cells.push((o, a));
            }
        }
    }
    Ok(lux_from_cells(&cells, q.length(), gauge))
}

/// Shared bisection core over (length, |value|) pairs.
fn lux_from_cells<T: Real>(cells: &[(T, T)], q_len: T, gauge: &OrliczGauge<T>) -> T {
    let mut mass = T::zero();
    for (len, a) in cells {
        mass = mass + *len * *a;
    }
    if mass == T::zero() {
        return T::zero();
    }
    let avg = mass / q_len;
    if gauge.alpha() == T::zero() {
        return avg;
    }
    let constraint = |lambda: T| {
        let mut acc = T::zero();
        for (len, a) in cells {
            acc = acc + *len * gauge.phi(*a / lambda);
        }
        acc / q_len
    };
    // G(avg) >= Φ(1) > 1 by Jensen, so the average brackets from below;
    // double until the constraint drops through 1.
    let mut lo = avg;
    let mut hi = avg;
    let mut guard = 0;
    while constraint(hi) > T::one() {
        lo = hi;
        hi = hi * T::of(2.0);
        guard += 1;
        if guard > 300 {
            break;
        }
    }
    let rel = T::of(1e-10);
    for _ in 0..200 {
        if hi - lo <= rel * hi {
            break;
        }
        let mid = (lo + hi) * T::of(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if constraint(mid) > T::one() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) * T::of(0.5)
}

/// Orlicz maximal operator: at each cell, the supremum of the Luxemburg norm
/// over cell-aligned intervals containing it. Costs O(n^3 · bisection) for
/// `alpha > 0`; for the plain gauge it reduces exactly to `hl_maximal`.
pub fn orlicz_maximal<T: Real>(
    f: &SampledFunction<T>,
    gauge: &OrliczGauge<T>,
) -> Result<SampledFunction<T>> {
    if gauge.alpha() == T::zero() {
        return hl_maximal(f, T::one());
    }
    let n = f.n_cells();
    let widths = f.grid().widths();
    let absvals: Vec<T> = f.values().iter().map(|v| v.abs()).collect();
    let mut best = vec![T::zero(); n];
    let mut cells: Vec<(T, T)> = Vec::with_capacity(n);
    let mut lux_by_j = Vec::with_capacity(n);
    for i in 0..n {
        cells.clear();
        lux_by_j.clear();
        let mut q_len = T::zero();
        for j in i + 1..=n {
            let c = j - 1;
            q_len = q_len + widths[c];
            if absvals[c] > T::zero() {
                cells.push((widths[c], absvals[c]));
            }
            lux_by_j.push(lux_from_cells(&cells, q_len, gauge));
        }
        let mut run = T::zero();
        for g in (i..n).rev() {
            let v = lux_by_j[g - i];
            if v > run {
                run = v;
            }
            if run > best[g] {
                best[g] = run;
            }
        }
    }
    SampledFunction::new(f.grid().clone(), best)
}

/// Sharp maximal function `sup_{I ∋ x} (1/|I|) ∫_I |f - f_I|`, with the
/// `δ < 1` variant `M^♯(|f|^δ)^{1/δ}`.
pub fn sharp_maximal<T: Real>(f: &SampledFunction<T>, delta: T) -> Result<SampledFunction<T>> {
    if !(delta > T::zero() && delta <= T::one()) {
        return Err(Error::InvalidParameter("delta must lie in (0, 1]".into()));
    }
    let n = f.n_cells();
    let widths = f.grid().widths();
    let vals: Vec<T> = if delta == T::one() {
        f.values().to_vec()
    } else {
        f.values().iter().map(|v| v.abs().powf(delta)).collect()
    };
    let (w, s) = prefix_sums(&widths, &vals);
    let mut best = vec![T::zero(); n];
    let mut osc_by_j = Vec::with_capacity(n);
    for i in 0..n {
        osc_by_j.clear();
        for j in i + 1..=n {
            let len = w[j] - w[i];
            let avg = (s[j] - s[i]) / len;
            let mut osc = T::zero();
            for c in i..j {
                osc = osc + widths[c] * (vals[c] - avg).abs();
            }
            osc_by_j.push(osc / len);
        }
        let mut run = T::zero();
        for g in (i..n).rev() {
            let v = osc_by_j[g - i];
            if v > run {
                run = v;
            }
            if run > best[g] {
                best[g] = run;
            }
        }
    }
    let out = if delta == T::one() {
        best
    } else {
        best.into_iter().map(|v| v.powf(delta.recip())).collect()
    };
    SampledFunction::new(f.grid().clone(), out)
}

/// Vector-valued maximal extension `(Σ_j (M f_j)^q)^{1/q}`.
pub fn vv_maximal<T: Real>(fs: &[SampledFunction<T>], q: T) -> Result<SampledFunction<T>> {
    if fs.is_empty() {
        return Err(Error::InvalidParameter("empty function sequence".into()));
    }
    if !(q > T::one()) {
        return Err(Error::InvalidParameter("vector exponent q must be > 1".into()));
    }
    for f in &fs[1..] {
        if !f.same_grid(&fs[0]) {
            return Err(Error::GridMismatch);
        }
    }
    let n = fs[0].n_cells();
    let mut acc = vec![T::zero(); n];
    for f in fs {
        let m = hl_maximal(f, T::one())?;
        for (a, v) in acc.iter_mut().zip(m.values()) {
            *a = *a + v.powf(q);
        }
    }
    let values = acc.into_iter().map(|v| v.powf(q.recip())).collect();
    SampledFunction::new(fs[0].grid().clone(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    /// Naive per-point scan over every cell-aligned interval; the oracle the
    /// shipped engines are held to. Averages are formed from the same prefix
    /// sums the engines use, so the comparison is exact: the oracle checks
    /// the interval enumeration, not the summation order.
    fn brute_force_maximal(f: &SampledFunction<f64>) -> Vec<f64> {
        let n = f.n_cells();
        let widths = f.grid().widths();
        let vals: Vec<f64> = f.values().iter().map(|v| v.abs()).collect();
        let (w, s) = prefix_sums(&widths, &vals);
        let mut out = vals.clone();
        for k in 0..n {
            for i in 0..=k {
                for j in k + 1..=n {
                    out[k] = out[k].max((s[j] - s[i]) / (w[j] - w[i]));
                }
            }
        }
        out
    }

    fn indicator_on(lo: f64, hi: f64) -> impl Fn(f64) -> f64 {
        move |x| if x >= lo && x < hi { 1.0 } else { 0.0 }
    }

    #[test]
    fn maximal_of_indicator_matches_closed_form() {
        let g = Grid::uniform(Interval::new(-1.0, 2.0).unwrap(), 3 * 512).unwrap();
        let f = SampledFunction::sample(g, indicator_on(0.0, 1.0)).unwrap();
        let m = hl_maximal(&f, 1.0).unwrap();
        let cell = 3.0 / (3.0 * 512.0);
        for i in 0..f.n_cells() {
            let x = f.rep(i);
            let expected = if (0.0..1.0).contains(&x) {
                1.0
            } else if x >= 1.0 {
                1.0 / x
            } else {
                1.0 / (1.0 - x)
            };
            assert!(
                (m.values()[i] - expected).abs() <= 1.5 * cell,
                "x = {x}: got {}, want {expected}",
                m.values()[i]
            );
        }
    }

    #[test]
    fn maximal_of_zero_is_zero() {
        let g = Grid::uniform(Interval::new(0.0, 1.0).unwrap(), 16).unwrap();
        let m = hl_maximal(&SampledFunction::zero(g), 1.0).unwrap();
        assert!(m.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn engines_agree_exactly_with_brute_force() {
        let mut rng = crate::fixtures::rng(7);
        for _ in 0..10 {
            let f = crate::fixtures::random_function::<f64>(
                &mut rng,
                Interval::new(-1.0, 1.0).unwrap(),
                48,
                10.0,
            );
            let m = hl_maximal(&f, 1.0).unwrap();
            let oracle = brute_force_maximal(&f);
            assert_eq!(m.values(), &oracle[..]);
        }
    }

    #[test]
    fn hull_sweep_matches_quadratic_sweep() {
        let mut rng = crate::fixtures::rng(11);
        let n = 3000; // above the hull cutoff
        let g = Grid::uniform(Interval::new(0.0, 1.0).unwrap(), n).unwrap();
        let mut vals: Vec<f64> = Vec::with_capacity(n);
        for _ in 0..n {
            vals.push(rand::Rng::gen_range(&mut rng, -5.0..5.0));
        }
        let f = SampledFunction::new(g, vals).unwrap();
        let widths = f.grid().widths();
        let powered: Vec<f64> = f.values().iter().map(|v| v.abs()).collect();
        let fast = interval_sup_averages(&widths, &powered);
        let mut slow = powered.clone();
        let (w, s) = prefix_sums(&widths, &powered);
        quadratic_sweep(&w, &s, &mut slow, 0, n);
        assert_eq!(fast, slow);
    }

    #[test]
    fn maximal_dominates_and_is_homogeneous() {
        let mut rng = crate::fixtures::rng(3);
        for _ in 0..20 {
            let f = crate::fixtures::random_function::<f64>(
                &mut rng,
                Interval::new(0.0, 1.0).unwrap(),
                64,
                4.0,
            );
            let m = hl_maximal(&f, 1.0).unwrap();
            for i in 0..f.n_cells() {
                assert!(m.values()[i] >= f.values()[i].abs());
            }
            // homogeneity: exact on the sup set, so equal to rounding
            let c = 3.5;
            let scaled = hl_maximal(&f.map(|v| c * v).unwrap(), 1.0).unwrap();
            for i in 0..f.n_cells() {
                let want = c * m.values()[i];
                assert!((scaled.values()[i] - want).abs() <= 1e-14 * want.abs());
            }
        }
    }

    #[test]
    fn iterated_maximal_agrees_with_composition() {
        let g = Grid::uniform(Interval::new(0.0, 20.0).unwrap(), 400).unwrap();
        let f = SampledFunction::sample(g, indicator_on(0.0, 1.0)).unwrap();
        let m1 = iterated_maximal(&f, 1).unwrap();
        assert_eq!(m1.values(), hl_maximal(&f, 1.0).unwrap().values());
        let m2 = iterated_maximal(&f, 2).unwrap();
        let composed = hl_maximal(&m1, 1.0).unwrap();
        assert_eq!(m2.values(), composed.values());
        // M^2 >= M pointwise, and M^2 χ picks up the (1/x) log x growth
        for i in 0..f.n_cells() {
            assert!(m2.values()[i] >= m1.values()[i]);
            let x = f.rep(i);
            if x >= std::f64::consts::E {
                assert!(m2.values()[i] >= 0.9 * x.ln() / x, "x = {x}");
            }
        }
    }

    #[test]
    fn luxemburg_zero_and_plain_average() {
        let g = Grid::uniform(Interval::new(0.0, 1.0).unwrap(), 64).unwrap();
        let z = SampledFunction::zero(g.clone());
        let q = Interval::new(0.0, 1.0).unwrap();
        assert_eq!(
            luxemburg_norm(&z, &q, &OrliczGauge::l_log_l()).unwrap(),
            0.0
        );
        let f = SampledFunction::sample(g, |x: f64| x).unwrap();
        let plain = luxemburg_norm(&f, &q, &OrliczGauge::plain()).unwrap();
        let avg = f.average_on(&q).unwrap();
        assert!((plain - avg).abs() <= 1e-10 * avg);
    }

    /// Independent scalar oracle for ‖1‖_{L log L, (0,1)}: bisection on
    /// (1/λ) log(e + 1/λ) = 1 alone, no sampled functions involved.
    fn scalar_logl_norm_of_one() -> f64 {
        let eqn = |lam: f64| (1.0 / lam) * (std::f64::consts::E + 1.0 / lam).ln();
        let (mut lo, mut hi) = (1.0, 4.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if eqn(mid) > 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn luxemburg_of_unit_function_matches_scalar_equation() {
        let g = Grid::uniform(Interval::new(0.0, 1.0).unwrap(), 32).unwrap();
        let f = SampledFunction::sample(g, |_| 1.0).unwrap();
        let q = Interval::new(0.0, 1.0).unwrap();
        let got = luxemburg_norm(&f, &q, &OrliczGauge::l_log_l()).unwrap();
        let oracle = scalar_logl_norm_of_one();
        assert!(
            (got - oracle).abs() < 1e-8,
            "got {got}, scalar oracle {oracle}"
        );
    }

    #[test]
    fn luxemburg_homogeneous_and_monotone() {
        let mut rng = crate::fixtures::rng(5);
        let q = Interval::new(0.0, 1.0).unwrap();
        let gauge = OrliczGauge::l_log_l();
        for _ in 0..10 {
            let f = crate::fixtures::random_function::<f64>(
                &mut rng,
                Interval::new(0.0, 1.0).unwrap(),
                32,
                6.0,
            );
            let base = luxemburg_norm(&f, &q, &gauge).unwrap();
            let c = 2.75;
            let scaled = luxemburg_norm(&f.map(|v| c * v).unwrap(), &q, &gauge).unwrap();
            assert!((scaled - c * base).abs() <= 1e-9 * (1.0 + c * base));
            let bigger = luxemburg_norm(&f.map(|v| v.abs() + 0.5).unwrap(), &q, &gauge).unwrap();
            assert!(bigger >= base - 1e-12);
        }
    }

    #[test]
    fn orlicz_plain_gauge_is_exactly_the_maximal_operator() {
        let g = Grid::uniform(Interval::new(-1.0, 2.0).unwrap(), 96).unwrap();
        let f = SampledFunction::sample(g, indicator_on(0.0, 1.0)).unwrap();
        let a = orlicz_maximal(&f, &OrliczGauge::plain()).unwrap();
        let b = hl_maximal(&f, 1.0).unwrap();
        assert_eq!(a.values(), b.values());
    }

    #[test]
    fn orlicz_monotone_in_alpha_and_dominates_maximal() {
        let g = Grid::uniform(Interval::new(-1.0, 2.0).unwrap(), 48).unwrap();
        let f = SampledFunction::sample(g, indicator_on(0.0, 1.0)).unwrap();
        let m = hl_maximal(&f, 1.0).unwrap();
        let o1 = orlicz_maximal(&f, &OrliczGauge::l_log_l()).unwrap();
        let o2 = orlicz_maximal(&f, &OrliczGauge::new(2.0).unwrap()).unwrap();
        for i in 0..f.n_cells() {
            assert!(o1.values()[i] >= m.values()[i] - 1e-12);
            assert!(o2.values()[i] >= o1.values()[i] - 1e-9);
        }
    }

    #[test]
    fn sharp_maximal_basics() {
        let g = Grid::uniform(Interval::new(-1.0f64, 2.0).unwrap(), 90).unwrap();
        let constant = SampledFunction::sample(g.clone(), |_| 3.25).unwrap();
        let sharp = sharp_maximal(&constant, 1.0).unwrap();
        // oscillation of a constant vanishes (to prefix-sum rounding)
        assert!(sharp.values().iter().all(|v| v.abs() < 1e-12));

        let f = SampledFunction::sample(g, indicator_on(0.0, 1.0)).unwrap();
        let sf = sharp_maximal(&f, 1.0).unwrap();
        assert!(sf.values().iter().all(|v| *v <= 1.0 + 1e-12));

        // M♯ f <= 2 M f pointwise
        let mut rng = crate::fixtures::rng(9);
        for _ in 0..10 {
            let f = crate::fixtures::random_function::<f64>(
                &mut rng,
                Interval::new(0.0, 1.0).unwrap(),
                48,
                5.0,
            );
            let sharp = sharp_maximal(&f, 1.0).unwrap();
            let m = hl_maximal(&f, 1.0).unwrap();
            for i in 0..f.n_cells() {
                assert!(sharp.values()[i] <= 2.0 * m.values()[i] + 1e-12);
            }
        }
    }

    #[test]
    fn vector_valued_reductions() {
        let g = Grid::uniform(Interval::new(-1.0, 2.0).unwrap(), 60).unwrap();
        let f = SampledFunction::sample(g.clone(), indicator_on(0.0, 1.0)).unwrap();
        let single = vv_maximal(std::slice::from_ref(&f), 2.0).unwrap();
        let m = hl_maximal(&f, 1.0).unwrap();
        for i in 0..f.n_cells() {
            assert!((single.values()[i] - m.values()[i]).abs() < 1e-14);
        }
        let zeros = SampledFunction::zero(g);
        let padded = vv_maximal(&[f.clone(), zeros.clone(), zeros], 3.0).unwrap();
        for i in 0..f.n_cells() {
            assert!((padded.values()[i] - m.values()[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn disjoint_indicator_vector_is_bounded_in_little_ellq() {
        // ‖{χ_{E_j}}(x)‖_{ℓ^q} <= 1 pointwise for pairwise disjoint E_j
        let g = Grid::uniform(Interval::new(0.0, 1.0).unwrap(), 64).unwrap();
        let parts = [(0.0, 0.25), (0.25, 0.5), (0.625, 1.0)];
        let fs: Vec<_> = parts
            .iter()
            .map(|&(a, b)| SampledFunction::sample(g.clone(), indicator_on(a, b)).unwrap())
            .collect();
        let q = 2.5f64;
        for i in 0..64 {
            let ell_q: f64 = fs
                .iter()
                .map(|f| f.values()[i].powf(q))
                .sum::<f64>()
                .powf(1.0 / q);
            assert!(ell_q <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = Grid::uniform(Interval::new(0.0, 1.0).unwrap(), 8).unwrap();
        let f = SampledFunction::zero(g);
        assert!(hl_maximal(&f, 0.5).is_err());
        assert!(iterated_maximal(&f, 0).is_err());
        assert!(sharp_maximal(&f, 0.0).is_err());
        assert!(sharp_maximal(&f, 1.5).is_err());
        assert!(vv_maximal(&[f], 1.0).is_err());
        assert!(OrliczGauge::<f64>::new(-1.0).is_err());
    }
}
