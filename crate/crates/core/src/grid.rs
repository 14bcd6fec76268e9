//! Sampled piecewise-constant functions, level-set measures, and
//! `L^p` / weak-`L^p` functionals.
//!
//! A [`Grid`] is a strictly increasing sequence of cell edges tiling a base
//! interval with half-open cells `[e_i, e_{i+1})`. A [`SampledFunction`]
//! attaches one finite value per cell and is treated as exactly piecewise
//! constant: every integral, average and level-set measure below is a closed
//! form in the cell data.

use crate::error::{Error, Result};
use crate::util::fmt_e12;
use crate::Real;

/// Nonempty bounded interval `(lo, hi)`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Interval<T> {
    lo: T,
    hi: T,
}

impl<T: Real> Interval<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(Error::InvalidInterval {
                lo: lo.as_f64(),
                hi: hi.as_f64(),
            });
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> T {
        self.lo
    }

    pub fn hi(&self) -> T {
        self.hi
    }

    pub fn length(&self) -> T {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> T {
        (self.lo + self.hi) * T::of(0.5)
    }

    /// Half-open containment `lo <= x < hi`.
    pub fn contains(&self, x: T) -> bool {
        self.lo <= x && x < self.hi
    }

    pub fn contains_interval(&self, other: &Interval<T>) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersect(&self, other: &Interval<T>) -> Option<Interval<T>> {
        let lo = if self.lo > other.lo { self.lo } else { other.lo };
        let hi = if self.hi < other.hi { self.hi } else { other.hi };
        (lo < hi).then_some(Interval { lo, hi })
    }

    /// Length of the overlap with `other`, zero when disjoint.
    pub fn overlap(&self, other: &Interval<T>) -> T {
        self.intersect(other).map_or_else(T::zero, |i| i.length())
    }
}

/// Cell layout of a grid.
///
/// `LogUniform` refines toward the left endpoint: cell widths grow
/// geometrically away from it, with the smallest cell adjacent to the
/// endpoint and of width `length / n^2`. That resolves functions with a
/// logarithmic-type singularity at the left endpoint far beyond what a
/// uniform grid of the same size can reach.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Spacing {
    Uniform,
    LogUniform,
}

/// Strictly increasing cell edges covering a base interval.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid<T> {
    edges: Vec<T>,
    spacing: Spacing,
}

impl<T: Real> Grid<T> {
    pub fn uniform(domain: Interval<T>, n_cells: usize) -> Result<Self> {
        if n_cells == 0 {
            return Err(Error::InvalidParameter("cell count must be >= 1".into()));
        }
        let len = domain.length();
        let nt = T::of_usize(n_cells);
        let mut edges = Vec::with_capacity(n_cells + 1);
        for i in 0..=n_cells {
            edges.push(domain.lo() + len * T::of_usize(i) / nt);
        }
        edges[0] = domain.lo();
        edges[n_cells] = domain.hi();
        Self::from_edges(edges, Spacing::Uniform)
    }

    /// Geometric cell widths growing away from the left endpoint, smallest
    /// cell `length / n^2` adjacent to it.
    pub fn log_uniform(domain: Interval<T>, n_cells: usize) -> Result<Self> {
        let n = n_cells.max(1) as f64;
        Self::log_uniform_with_floor(domain, n_cells, 1.0 / (n * n))
    }

    /// Geometric cell widths with an explicit smallest-cell fraction: the
    /// cell adjacent to the left endpoint has width `length · min_cell_frac`.
    /// Deep floors resolve level sets of functions growing like powers of
    /// `log(1/x)` far beyond the default `1/n^2`.
    pub fn log_uniform_with_floor(
        domain: Interval<T>,
        n_cells: usize,
        min_cell_frac: f64,
    ) -> Result<Self> {
        if n_cells == 0 {
            return Err(Error::InvalidParameter("cell count must be >= 1".into()));
        }
        if !(min_cell_frac > 0.0 && min_cell_frac < 1.0 / n_cells as f64) && n_cells > 1 {
            return Err(Error::InvalidParameter(
                "smallest-cell fraction must lie in (0, 1/n)".into(),
            ));
        }
        if n_cells == 1 {
            return Self::from_edges(vec![domain.lo(), domain.hi()], Spacing::LogUniform);
        }
        let n = n_cells as f64;
        // Growth increment d solves sum_{k<n} w1 (1+d)^k = len with
        // w1 = len · min_cell_frac, i.e. ((1+d)^n - 1)/d = 1/min_cell_frac.
        let target = 1.0 / min_cell_frac;
        let ratio_sum = |d: f64| (n * d.ln_1p()).exp_m1() / d;
        let (mut lo, mut hi) = (1e-15, 8.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if ratio_sum(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= f64::EPSILON * hi {
                break;
            }
        }
        let d = 0.5 * (lo + hi);
        let len = domain.length().as_f64();
        let base = domain.lo().as_f64();
        let mut w = len / ratio_sum(d);
        let mut e = base;
        let mut edges = Vec::with_capacity(n_cells + 1);
        edges.push(domain.lo());
        for _ in 0..n_cells - 1 {
            e += w;
            w *= 1.0 + d;
            edges.push(T::of(e));
        }
        edges.push(domain.hi());
        Self::from_edges(edges, Spacing::LogUniform)
    }

    pub fn from_edges(edges: Vec<T>, spacing: Spacing) -> Result<Self> {
        if edges.len() < 2 {
            return Err(Error::InvalidParameter("grid needs at least one cell".into()));
        }
        for pair in edges.windows(2) {
            if !(pair[0].is_finite() && pair[1].is_finite()) || pair[0] >= pair[1] {
                return Err(Error::InvalidInterval {
                    lo: pair[0].as_f64(),
                    hi: pair[1].as_f64(),
                });
            }
        }
        Ok(Self { edges, spacing })
    }

    pub fn n_cells(&self) -> usize {
        self.edges.len() - 1
    }

    pub fn edges(&self) -> &[T] {
        &self.edges
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    pub fn domain(&self) -> Interval<T> {
        Interval {
            lo: self.edges[0],
            hi: *self.edges.last().expect("nonempty"),
        }
    }

    pub fn cell(&self, i: usize) -> Interval<T> {
        Interval {
            lo: self.edges[i],
            hi: self.edges[i + 1],
        }
    }

    pub fn width(&self, i: usize) -> T {
        self.edges[i + 1] - self.edges[i]
    }

    pub fn widths(&self) -> Vec<T> {
        (0..self.n_cells()).map(|i| self.width(i)).collect()
    }

    pub fn min_width(&self) -> T {
        (0..self.n_cells())
            .map(|i| self.width(i))
            .fold(T::infinity(), |a, w| if w < a { w } else { a })
    }

    /// Representative point of cell `i`: the midpoint on uniform grids, the
    /// geometric midpoint (relative to the refined endpoint) on log-uniform
    /// grids. The cell touching the refined endpoint has no geometric
    /// midpoint and falls back to its arithmetic midpoint.
    pub fn rep(&self, i: usize) -> T {
        let (lo, hi) = (self.edges[i], self.edges[i + 1]);
        match self.spacing {
            Spacing::Uniform => (lo + hi) * T::of(0.5),
            Spacing::LogUniform => {
                let base = self.edges[0];
                let a = lo - base;
                let b = hi - base;
                if a <= T::zero() {
                    (lo + hi) * T::of(0.5)
                } else {
                    base + (a * b).sqrt()
                }
            }
        }
    }

    pub fn reps(&self) -> Vec<T> {
        (0..self.n_cells()).map(|i| self.rep(i)).collect()
    }

    /// Index of the cell containing `x` under half-open semantics.
    pub fn cell_of(&self, x: T) -> Option<usize> {
        if x < self.edges[0] || x >= *self.edges.last().expect("nonempty") {
            return None;
        }
        let k = self.edges.partition_point(|e| *e <= x);
        Some(k - 1)
    }
}

/// Piecewise-constant function on a [`Grid`].
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction<T> {
    grid: Grid<T>,
    values: Vec<T>,
}

impl<T: Real> SampledFunction<T> {
    pub fn new(grid: Grid<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.n_cells() {
            return Err(Error::InvalidParameter(format!(
                "value count {} does not match cell count {}",
                values.len(),
                grid.n_cells()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                x: grid.rep(i).as_f64(),
            });
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` at the representative point of every cell.
    pub fn sample(grid: Grid<T>, f: impl Fn(T) -> T) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.n_cells());
        for i in 0..grid.n_cells() {
            let x = grid.rep(i);
            let v = f(x);
            if !v.is_finite() {
                return Err(Error::NonFinite { x: x.as_f64() });
            }
            values.push(v);
        }
        Ok(Self { grid, values })
    }

    pub fn zero(grid: Grid<T>) -> Self {
        let values = vec![T::zero(); grid.n_cells()];
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn n_cells(&self) -> usize {
        self.grid.n_cells()
    }

    pub fn domain(&self) -> Interval<T> {
        self.grid.domain()
    }

    pub fn rep(&self, i: usize) -> T {
        self.grid.rep(i)
    }

    pub fn width(&self, i: usize) -> T {
        self.grid.width(i)
    }

    /// True when both functions share bitwise-identical edges.
    pub fn same_grid(&self, other: &Self) -> bool {
        self.grid.edges == other.grid.edges
    }

    pub fn value_at(&self, x: T) -> Option<T> {
        self.grid.cell_of(x).map(|i| self.values[i])
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Result<Self> {
        let values = self.values.iter().map(|&v| f(v)).collect();
        Self::new(self.grid.clone(), values)
    }

    pub fn map_with_x(&self, f: impl Fn(T, T) -> T) -> Result<Self> {
        let values = (0..self.n_cells())
            .map(|i| f(self.grid.rep(i), self.values[i]))
            .collect();
        Self::new(self.grid.clone(), values)
    }

    pub fn abs(&self) -> Self {
        let values = self.values.iter().map(|v| v.abs()).collect();
        Self {
            grid: self.grid.clone(),
            values,
        }
    }

    pub fn max_abs(&self) -> T {
        self.values
            .iter()
            .fold(T::zero(), |a, v| if v.abs() > a { v.abs() } else { a })
    }

    pub fn min_value(&self) -> T {
        self.values
            .iter()
            .fold(T::infinity(), |a, &v| if v < a { v } else { a })
    }

    /// `∫ f` over the whole domain.
    pub fn integral(&self) -> T {
        let mut acc = T::zero();
        for i in 0..self.n_cells() {
            acc = acc + self.values[i] * self.width(i);
        }
        acc
    }

    /// Average of `f` over `q` (clipped to cell overlaps, exact on the
    /// piecewise-constant representation). `q` must sit inside the domain.
    pub fn average_on(&self, q: &Interval<T>) -> Result<T> {
        if !self.domain().contains_interval(q) {
            return Err(Error::InvalidParameter(
                "interval escapes the sampled domain".into(),
            ));
        }
        let mut acc = T::zero();
        for i in 0..self.n_cells() {
            let o = self.grid.cell(i).overlap(q);
            if o > T::zero() {
                acc = acc + self.values[i] * o;
            }
        }
        Ok(acc / q.length())
    }

    /// Measure of the strict super-level set `{ |f| > t }`.
    pub fn level_set_measure(&self, t: T) -> T {
        let mut acc = T::zero();
        for i in 0..self.n_cells() {
            if self.values[i].abs() > t {
                acc = acc + self.width(i);
            }
        }
        acc
    }

    /// Level-set measures over a strictly increasing threshold grid. The
    /// resolution floor (twice the smallest cell width) travels with the
    /// curve so that fits can exclude unresolved points.
    pub fn level_set_curve(&self, thresholds: &[T]) -> Result<LevelSetCurve<T>> {
        let points = thresholds
            .iter()
            .map(|&t| (t, self.level_set_measure(t)))
            .collect();
        LevelSetCurve::new(points, T::of(2.0) * self.grid.min_width())
    }

    /// `(∫ |f|^p)^{1/p}`; computed in log space for p >= 16 to avoid
    /// overflow, and whenever the direct sum overflows anyway.
    pub fn lp_norm(&self, p: T) -> Result<T> {
        if !(p >= T::one()) {
            return Err(Error::InvalidParameter("lp_norm requires p >= 1".into()));
        }
        if self.values.iter().all(|v| *v == T::zero()) {
            return Ok(T::zero());
        }
        if p < T::of(16.0) {
            let mut acc = T::zero();
            for i in 0..self.n_cells() {
                let v = self.values[i].abs();
                if v > T::zero() {
                    acc = acc + v.powf(p) * self.width(i);
                }
            }
            if acc.is_finite() {
                return Ok(acc.powf(p.recip()));
            }
        }
        // log-space: log sum_i exp(p log|v_i| + log w_i)
        let mut terms = Vec::with_capacity(self.n_cells());
        for i in 0..self.n_cells() {
            let v = self.values[i].abs();
            if v > T::zero() {
                terms.push(p * v.ln() + self.width(i).ln());
            }
        }
        let m = terms.iter().fold(T::neg_infinity(), |a, &t| if t > a { t } else { a });
        let mut s = T::zero();
        for t in &terms {
            s = s + (*t - m).exp();
        }
        Ok(((m + s.ln()) / p).exp())
    }

    /// `sup_{t in grid} t · |{|f| > t}|^{1/p}`.
    pub fn weak_lp_quasinorm(&self, p: T, t_grid: &[T]) -> Result<T> {
        if !(p >= T::one()) {
            return Err(Error::InvalidParameter("weak norm requires p >= 1".into()));
        }
        if t_grid.is_empty() || t_grid.iter().any(|t| !(*t > T::zero())) {
            return Err(Error::InvalidParameter(
                "threshold grid must be nonempty and positive".into(),
            ));
        }
        let mut best = T::zero();
        for &t in t_grid {
            let v = t * self.level_set_measure(t).powf(p.recip());
            if v > best {
                best = v;
            }
        }
        Ok(best)
    }

    /// Restriction to `q`, splitting the two boundary cells exactly.
    pub fn restrict(&self, q: &Interval<T>) -> Result<Self> {
        if !self.domain().contains_interval(q) {
            return Err(Error::InvalidParameter(
                "restriction interval escapes the domain".into(),
            ));
        }
        let mut edges = vec![q.lo()];
        let mut values = Vec::new();
        for i in 0..self.n_cells() {
            if let Some(part) = self.grid.cell(i).intersect(q) {
                edges.push(part.hi());
                values.push(self.values[i]);
            }
        }
        *edges.last_mut().expect("nonempty") = q.hi();
        let grid = Grid::from_edges(edges, self.grid.spacing)?;
        Self::new(grid, values)
    }

    /// One `x,value` row per cell at its representative point, `%.12e`
    /// formatted.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,value\n");
        for i in 0..self.n_cells() {
            out.push_str(&fmt_e12(self.rep(i).as_f64()));
            out.push(',');
            out.push_str(&fmt_e12(self.values[i].as_f64()));
            out.push('\n');
        }
        out
    }
}

/// Sampled `(threshold, measure)` pairs with strictly increasing thresholds
/// and non-increasing measures.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelSetCurve<T> {
    points: Vec<(T, T)>,
    floor: T,
}

impl<T: Real> LevelSetCurve<T> {
    pub fn new(points: Vec<(T, T)>, floor: T) -> Result<Self> {
        for pair in points.windows(2) {
            if !(pair[0].0 < pair[1].0) {
                return Err(Error::InvalidParameter(
                    "thresholds must be strictly increasing".into(),
                ));
            }
            if pair[1].1 > pair[0].1 {
                return Err(Error::InvalidParameter(
                    "level-set measures must be non-increasing".into(),
                ));
            }
        }
        if points.iter().any(|(t, mu)| !t.is_finite() || !(*mu >= T::zero())) {
            return Err(Error::InvalidParameter(
                "curve points must be finite with nonnegative measures".into(),
            ));
        }
        Ok(Self { points, floor })
    }

    pub fn points(&self) -> &[(T, T)] {
        &self.points
    }

    /// Measures below this are grid noise, not decay.
    pub fn floor(&self) -> T {
        self.floor
    }

    /// Points whose measure clears the resolution floor.
    pub fn resolved(&self) -> Vec<(T, T)> {
        self.points
            .iter()
            .copied()
            .filter(|&(_, mu)| mu >= self.floor)
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,measure\n");
        for (t, mu) in &self.points {
            out.push_str(&fmt_e12(t.as_f64()));
            out.push(',');
            out.push_str(&fmt_e12(mu.as_f64()));
            out.push('\n');
        }
        out
    }
}
