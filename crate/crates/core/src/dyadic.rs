//! Dyadic lattices over a root interval, sparse and Carleson families,
//! greedy witness construction, sparse averaging operators, counting
//! functions, and iterated sparse composition.
//!
//! Cubes are half-open `[lo, hi)` so tilings are exact and counting
//! functions are unambiguous at boundaries. Containment between cubes is
//! decided by integer generation/index arithmetic, never by floating-point
//! endpoint comparison.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::grid::{Grid, Interval, SampledFunction, Spacing};
use crate::maximal::{luxemburg_norm, OrliczGauge};
use crate::Real;

pub const MAX_LATTICE_DEPTH: u32 = 30;
/// Counting functions materialize a full leaf grid; cap its generation.
const MAX_COUNTING_GENERATION: u32 = 24;

/// Address of a cube within its root: (generation, index).
pub type CubeId = (u32, u64);

/// A dyadic subinterval of a root interval: the root bisected `generation`
/// times, piece `index`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DyadicCube<T> {
    root: Interval<T>,
    generation: u32,
    index: u64,
}

impl<T: Real> DyadicCube<T> {
    pub fn new(root: Interval<T>, generation: u32, index: u64) -> Result<Self> {
        if generation > 63 || index >= 1u64 << generation.min(63) {
            return Err(Error::InvalidParameter(format!(
                "cube index {index} out of range for generation {generation}"
            )));
        }
        Ok(Self { root, generation, index })
    }

    pub fn root(&self) -> Interval<T> {
        self.root
    }

    pub fn generation(&self) -> u32 {
        self.generation
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn id(&self) -> CubeId {
        (self.generation, self.index)
    }

    /// Sidelength `|root| · 2^{-generation}`.
    pub fn sidelength(&self) -> T {
        self.root.length() * T::of(2.0f64.powi(-(self.generation as i32)))
    }

    pub fn interval(&self) -> Interval<T> {
        let lo = dyadic_edge(&self.root, self.generation, self.index);
        let hi = dyadic_edge(&self.root, self.generation, self.index + 1);
        Interval::new(lo, hi).expect("dyadic edges are ordered")
    }

    pub fn parent(&self) -> Option<Self> {
        (self.generation > 0).then(|| Self {
            root: self.root,
            generation: self.generation - 1,
            index: self.index >> 1,
        })
    }

    /// The two children obtained by splitting at the median point.
    pub fn children(&self) -> [Self; 2] {
        [
            Self { root: self.root, generation: self.generation + 1, index: self.index << 1 },
            Self { root: self.root, generation: self.generation + 1, index: (self.index << 1) | 1 },
        ]
    }

    pub fn contains_cube(&self, other: &Self) -> bool {
        contains_id(self.id(), other.id())
    }
}

/// Edge `k / 2^g` of the root, exact for dyadic fractions.
fn dyadic_edge<T: Real>(root: &Interval<T>, generation: u32, k: u64) -> T {
    if k == 1u64 << generation {
        return root.hi();
    }
    let frac = T::of(k as f64 * 2.0f64.powi(-(generation as i32)));
    root.lo() + root.length() * frac
}

/// `inner` ⊆ `outer` in the shared lattice.
fn contains_id(outer: CubeId, inner: CubeId) -> bool {
    inner.0 >= outer.0 && (inner.1 >> (inner.0 - outer.0)) == outer.1
}

fn strictly_contains_id(outer: CubeId, inner: CubeId) -> bool {
    inner.0 > outer.0 && (inner.1 >> (inner.0 - outer.0)) == outer.1
}

/// All cubes of generations `0..=depth`: the standard dyadic lattice of the
/// root, `2^{depth+1} - 1` cubes.
pub fn build_lattice<T: Real>(root: Interval<T>, depth: u32) -> Result<Vec<DyadicCube<T>>> {
    if depth > MAX_LATTICE_DEPTH {
        return Err(Error::DepthLimit { depth, max: MAX_LATTICE_DEPTH });
    }
    let mut cubes = Vec::with_capacity((1usize << (depth + 1)) - 1);
    for g in 0..=depth {
        for i in 0..(1u64 << g) {
            cubes.push(DyadicCube { root, generation: g, index: i });
        }
    }
    Ok(cubes)
}

/// A finite set of dyadic cubes over one root, optionally equipped with
/// pairwise-disjoint witness sets `E(Q) ⊆ Q` certifying `η`-sparseness.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseFamily<T> {
    root: Interval<T>,
    ids: Vec<CubeId>,
    witnesses: Option<BTreeMap<CubeId, Vec<Interval<T>>>>,
    eta: Option<T>,
}

impl<T: Real> SparseFamily<T> {
    pub fn new(root: Interval<T>, cubes: &[DyadicCube<T>]) -> Result<Self> {
        for c in cubes {
            if c.root != root {
                return Err(Error::InvalidParameter(
                    "family cubes must share the root interval".into(),
                ));
            }
        }
        let ids = cubes.iter().map(|c| c.id()).collect();
        Ok(Self::from_ids(root, ids))
    }

    pub fn from_ids(root: Interval<T>, mut ids: Vec<CubeId>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        Self { root, ids, witnesses: None, eta: None }
    }

    /// The chain `{ [lo, lo + |root| 2^{-k}) : k = 0..=depth }`.
    pub fn chain(root: Interval<T>, depth: u32) -> Self {
        Self::from_ids(root, (0..=depth).map(|g| (g, 0u64)).collect())
    }

    pub fn root(&self) -> Interval<T> {
        self.root
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[CubeId] {
        &self.ids
    }

    pub fn cube(&self, id: CubeId) -> DyadicCube<T> {
        DyadicCube { root: self.root, generation: id.0, index: id.1 }
    }

    pub fn cubes(&self) -> impl Iterator<Item = DyadicCube<T>> + '_ {
        self.ids.iter().map(|&id| self.cube(id))
    }

    pub fn max_generation(&self) -> u32 {
        self.ids.iter().map(|id| id.0).max().unwrap_or(0)
    }

    pub fn witnesses(&self) -> Option<&BTreeMap<CubeId, Vec<Interval<T>>>> {
        self.witnesses.as_ref()
    }

    /// Achieved sparseness constant, when witnesses are attached.
    pub fn eta(&self) -> Option<T> {
        self.eta
    }

    /// Carleson packing constant: the maximum over the family's lattice
    /// closure (members and all their ancestors) of
    /// `Σ_{P ∈ family, P ⊆ Q} |P| / |Q|`.
    pub fn carleson_constant(&self) -> Result<T> {
        if self.ids.is_empty() {
            return Err(Error::InvalidParameter("empty family has no packing constant".into()));
        }
        let mut packing: BTreeMap<CubeId, T> = BTreeMap::new();
        for &id in &self.ids {
            let len = self.cube(id).sidelength();
            let (mut g, mut i) = id;
            loop {
                *packing.entry((g, i)).or_insert_with(T::zero) = packing
                    .get(&(g, i))
                    .copied()
                    .unwrap_or_else(T::zero)
                    + len;
                if g == 0 {
                    break;
                }
                g -= 1;
                i >>= 1;
            }
        }
        let mut best = T::zero();
        for (&id, &sum) in &packing {
            let ratio = sum / self.cube(id).sidelength();
            if ratio > best {
                best = ratio;
            }
        }
        Ok(best)
    }

    /// Greedy witnesses: `E(Q) = Q` minus the union of the maximal family
    /// members strictly inside `Q`. The witnesses are pairwise disjoint by
    /// construction inside one lattice; the achieved `η` is the minimum of
    /// `|E(Q)|/|Q|`, zero when some member is fully covered by members below
    /// it (the greedy rule then fails to certify sparseness).
    pub fn greedy_witnesses(&self) -> Result<SparseFamily<T>> {
        if self.ids.is_empty() {
            return Err(Error::InvalidParameter("empty family has no witnesses".into()));
        }
        let mut witnesses = BTreeMap::new();
        let mut eta = T::infinity();
        for &q in &self.ids {
            let descendants: Vec<CubeId> = self
                .ids
                .iter()
                .copied()
                .filter(|&p| strictly_contains_id(q, p))
                .collect();
            let maximal: Vec<CubeId> = descendants
                .iter()
                .copied()
                .filter(|&p| !descendants.iter().any(|&d| d != p && contains_id(d, p)))
                .collect();
            let e = subtract_cubes(self.cube(q).interval(), maximal.iter().map(|&m| self.cube(m).interval()));
            let measure = e.iter().fold(T::zero(), |a, i| a + i.length());
            let ratio = measure / self.cube(q).sidelength();
            if ratio < eta {
                eta = ratio;
            }
            witnesses.insert(q, e);
        }
        Ok(SparseFamily {
            root: self.root,
            ids: self.ids.clone(),
            witnesses: Some(witnesses),
            eta: Some(eta),
        })
    }

    /// Counting function `N(x) = Σ_{P ∈ family} χ_P(x)` on the leaf grid of
    /// the family's deepest generation.
    pub fn counting_function(&self) -> Result<SampledFunction<T>> {
        let g_max = self.max_generation();
        if g_max > MAX_COUNTING_GENERATION {
            return Err(Error::DepthLimit { depth: g_max, max: MAX_COUNTING_GENERATION });
        }
        let leaves = 1usize << g_max;
        let grid = Grid::uniform(self.root, leaves)?;
        let mut counts = vec![0u32; leaves];
        for &(g, i) in &self.ids {
            let span = 1usize << (g_max - g);
            let start = (i as usize) << (g_max - g);
            for c in &mut counts[start..start + span] {
                *c += 1;
            }
        }
        let values = counts.into_iter().map(|c| T::of_usize(c as usize)).collect();
        SampledFunction::new(grid, values)
    }

    /// One line per cube `generation,index[,w_lo,w_hi...]` after a
    /// `root_lo,root_hi` header; floats use shortest round-trip formatting.
    pub fn to_text(&self) -> String {
        let mut out = String::from("root_lo,root_hi\n");
        out.push_str(&format!("{:e},{:e}\n", self.root.lo().as_f64(), self.root.hi().as_f64()));
        for &(g, i) in &self.ids {
            out.push_str(&format!("{g},{i}"));
            if let Some(w) = &self.witnesses {
                for part in &w[&(g, i)] {
                    out.push_str(&format!(",{:e},{:e}", part.lo().as_f64(), part.hi().as_f64()));
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::InvalidParameter(format!("family parse error: {m}"));
        let mut lines = text.lines();
        match lines.next() {
            Some("root_lo,root_hi") => {}
            _ => return Err(bad("missing header")),
        }
        let root_line = lines.next().ok_or_else(|| bad("missing root line"))?;
        let mut parts = root_line.split(',');
        let lo: f64 = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("bad root lo"))?;
        let hi: f64 = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("bad root hi"))?;
        let root = Interval::new(T::of(lo), T::of(hi))?;
        let mut ids = Vec::new();
        let mut witnesses: BTreeMap<CubeId, Vec<Interval<T>>> = BTreeMap::new();
        let mut any_witness = false;
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() < 2 || !fields.len().is_multiple_of(2) {
                return Err(bad("cube line needs generation,index and witness pairs"));
            }
            let g: u32 = fields[0].parse().map_err(|_| bad("bad generation"))?;
            let i: u64 = fields[1].parse().map_err(|_| bad("bad index"))?;
            let mut parts = Vec::new();
            for pair in fields[2..].chunks(2) {
                let a: f64 = pair[0].parse().map_err(|_| bad("bad witness endpoint"))?;
                let b: f64 = pair[1].parse().map_err(|_| bad("bad witness endpoint"))?;
                parts.push(Interval::new(T::of(a), T::of(b))?);
                any_witness = true;
            }
            ids.push((g, i));
            witnesses.insert((g, i), parts);
        }
        let mut fam = Self::from_ids(root, ids);
        if any_witness {
            let mut eta = T::infinity();
            for &id in &fam.ids {
                let m = witnesses
                    .get(&id)
                    .map(|v| v.iter().fold(T::zero(), |a, i| a + i.length()))
                    .unwrap_or_else(T::zero);
                let r = m / fam.cube(id).sidelength();
                if r < eta {
                    eta = r;
                }
            }
            fam.witnesses = Some(witnesses);
            fam.eta = Some(eta);
        }
        Ok(fam)
    }
}

/// `q` minus the union of disjoint dyadic subintervals.
fn subtract_cubes<T: Real>(
    q: Interval<T>,
    holes: impl Iterator<Item = Interval<T>>,
) -> Vec<Interval<T>> {
    let mut holes: Vec<Interval<T>> = holes.collect();
    holes.sort_by(|a, b| a.lo().partial_cmp(&b.lo()).expect("finite endpoints"));
    let mut out = Vec::new();
    let mut cursor = q.lo();
    for h in holes {
        if h.lo() > cursor {
            out.push(Interval::new(cursor, h.lo()).expect("ordered"));
        }
        cursor = h.hi();
    }
    if cursor < q.hi() {
        out.push(Interval::new(cursor, q.hi()).expect("ordered"));
    }
    out
}

/// Sparse averaging operator `Σ_{Q ∈ family, Q ∋ x} ‖f‖_{Φ,Q} χ_Q(x)`:
/// the plain gauge gives `A_S`, the `L log L` gauge gives `B_S`. The output
/// lives on `f`'s grid refined by the cube edges.
pub fn sparse_avg_operator<T: Real>(
    family: &SparseFamily<T>,
    f: &SampledFunction<T>,
    gauge: &OrliczGauge<T>,
) -> Result<SampledFunction<T>> {
    let domain = f.domain();
    for cube in family.cubes() {
        if !domain.contains_interval(&cube.interval()) {
            return Err(Error::CubeOutsideDomain {
                generation: cube.generation(),
                index: cube.index(),
            });
        }
    }
    let mut edges: Vec<T> = f.grid().edges().to_vec();
    let mut cube_data = Vec::with_capacity(family.len());
    for cube in family.cubes() {
        let iv = cube.interval();
        edges.push(iv.lo());
        edges.push(iv.hi());
        cube_data.push((iv, luxemburg_norm(f, &iv, gauge)?));
    }
    edges.sort_by(|a, b| a.partial_cmp(b).expect("finite edges"));
    edges.dedup();
    let grid = Grid::from_edges(edges, Spacing::Uniform)?;
    let mut values = vec![T::zero(); grid.n_cells()];
    for i in 0..grid.n_cells() {
        let x = grid.cell(i).midpoint();
        for (iv, lux) in &cube_data {
            if iv.contains(x) {
                values[i] = values[i] + *lux;
            }
        }
    }
    SampledFunction::new(grid, values)
}

/// Composition `A_{S_i}(A_{S_j} f)` of two plain sparse operators; the
/// families may live in different lattices (shifted roots allowed).
pub fn iterated_sparse<T: Real>(
    fam_i: &SparseFamily<T>,
    fam_j: &SparseFamily<T>,
    f: &SampledFunction<T>,
) -> Result<SampledFunction<T>> {
    let plain = OrliczGauge::plain();
    let inner = sparse_avg_operator(fam_j, f, &plain)?;
    sparse_avg_operator(fam_i, &inner, &plain)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Interval<f64> {
        Interval::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn lattice_depth_zero_and_two() {
        let l0 = build_lattice(unit(), 0).unwrap();
        assert_eq!(l0.len(), 1);
        assert_eq!(l0[0].interval(), unit());

        let l2 = build_lattice(unit(), 2).unwrap();
        assert_eq!(l2.len(), 7);
        for k in 0..4u64 {
            let c = DyadicCube::new(unit(), 2, k).unwrap();
            let iv = c.interval();
            assert_eq!(iv.lo(), k as f64 / 4.0);
            assert_eq!(iv.hi(), (k + 1) as f64 / 4.0);
        }
        assert!(build_lattice(unit(), 31).is_err());
    }

    #[test]
    fn lattice_properties_hold_exhaustively_at_depth_six() {
        let depth = 6u32;
        let root = unit();
        let lattice = build_lattice(root, depth).unwrap();

        // (1) generation-k cubes have sidelength 2^{-k} and tile the root
        for g in 0..=depth {
            let gen: Vec<_> = lattice.iter().filter(|c| c.generation() == g).collect();
            assert_eq!(gen.len(), 1 << g);
            let mut cursor = root.lo();
            for c in &gen {
                assert_eq!(c.sidelength(), 2.0f64.powi(-(g as i32)));
                assert_eq!(c.interval().lo(), cursor);
                cursor = c.interval().hi();
            }
            assert_eq!(cursor, root.hi());
        }

        // (2) two children in, one parent containing
        for c in &lattice {
            if c.generation() < depth {
                let [a, b] = c.children();
                assert!(c.contains_cube(&a) && c.contains_cube(&b));
                assert_eq!(a.interval().hi(), b.interval().lo());
            }
            match c.parent() {
                Some(p) => assert!(p.contains_cube(c)),
                None => assert_eq!(c.generation(), 0),
            }
        }

        // (3) nested or disjoint
        for a in &lattice {
            for b in &lattice {
                let nested = a.contains_cube(b) || b.contains_cube(a);
                let disjoint = a.interval().intersect(&b.interval()).is_none();
                assert!(nested || disjoint, "{:?} vs {:?}", a.id(), b.id());
            }
        }

        // (4) the lattice of any member embeds in the big lattice
        for c in &lattice {
            let sub_depth = depth - c.generation();
            for g in 0..=sub_depth {
                for i in 0..(1u64 << g) {
                    let global = (c.generation() + g, (c.index() << g) + i);
                    assert!(lattice.iter().any(|q| q.id() == global));
                }
            }
        }
    }

    #[test]
    fn carleson_constants_of_model_families() {
        // pairwise disjoint family: [0, 1/4), [1/4, 3/8), [1/2, 1)
        let disjoint = SparseFamily::from_ids(unit(), vec![(2, 0), (3, 2), (1, 1)]);
        assert_eq!(disjoint.carleson_constant().unwrap(), 1.0);

        // chain: 2 - 2^{-K}
        let k = 10u32;
        let chain = SparseFamily::chain(unit(), k);
        let got = chain.carleson_constant().unwrap();
        assert_eq!(got, 2.0 - 2.0f64.powi(-(k as i32)));

        // full lattice to depth K: K + 1
        let full = SparseFamily::new(unit(), &build_lattice(unit(), 5).unwrap()).unwrap();
        assert_eq!(full.carleson_constant().unwrap(), 6.0);
    }

    #[test]
    fn greedy_witnesses_on_model_families() {
        let disjoint = SparseFamily::from_ids(unit(), vec![(1, 0), (1, 1)]);
        let w = disjoint.greedy_witnesses().unwrap();
        assert_eq!(w.eta().unwrap(), 1.0);

        let chain = SparseFamily::chain(unit(), 8).greedy_witnesses().unwrap();
        assert_eq!(chain.eta().unwrap(), 0.5);
        let wit = chain.witnesses().unwrap();
        for k in 0..8u32 {
            let e = &wit[&(k, 0)];
            assert_eq!(e.len(), 1);
            assert_eq!(e[0].lo(), 2.0f64.powi(-(k as i32 + 1)));
            assert_eq!(e[0].hi(), 2.0f64.powi(-(k as i32)));
        }
        // deepest cube keeps itself
        assert_eq!(wit[&(8, 0)][0].lo(), 0.0);

        let full = SparseFamily::new(unit(), &build_lattice(unit(), 2).unwrap())
            .unwrap()
            .greedy_witnesses()
            .unwrap();
        assert_eq!(full.eta().unwrap(), 0.0);
    }

    #[test]
    fn sparse_implies_carleson_bound() {
        let mut rng = crate::fixtures::rng(21);
        let mut tested = 0;
        while tested < 25 {
            let fam = crate::fixtures::random_family::<f64>(&mut rng, unit(), 6, 0.35, 4.0);
            if fam.is_empty() {
                continue;
            }
            let w = fam.greedy_witnesses().unwrap();
            let eta = w.eta().unwrap();
            if eta == 0.0 {
                continue;
            }
            let lam = w.carleson_constant().unwrap();
            assert!(lam <= 1.0 / eta, "Λ = {lam}, 1/η = {}", 1.0 / eta);
            tested += 1;
        }
    }

    #[test]
    fn counting_function_of_chain() {
        let k = 12u32;
        let chain = SparseFamily::chain(unit(), k);
        let n = chain.counting_function().unwrap();
        for t in 1..=(k as i32 - 1) {
            assert_eq!(n.level_set_measure(t as f64), 2.0f64.powi(-t));
        }
        // disjoint family counts in {0, 1}
        let disjoint = SparseFamily::from_ids(unit(), vec![(2, 0), (2, 3)]);
        let nd = disjoint.counting_function().unwrap();
        assert!(nd.values().iter().all(|v| *v == 0.0 || *v == 1.0));
    }

    #[test]
    fn adding_a_disjoint_cube_bumps_the_count_there_only() {
        let base = SparseFamily::from_ids(unit(), vec![(1, 0), (2, 1)]);
        let bigger = SparseFamily::from_ids(unit(), vec![(1, 0), (2, 1), (2, 3)]);
        let n0 = base.counting_function().unwrap();
        let n1 = bigger.counting_function().unwrap();
        let added = DyadicCube::new(unit(), 2, 3).unwrap().interval();
        for i in 0..n0.n_cells() {
            let x = n0.grid().cell(i).midpoint();
            let expected = n0.values()[i] + if added.contains(x) { 1.0 } else { 0.0 };
            assert_eq!(n1.values()[i], expected);
        }
    }

    #[test]
    fn sparse_operator_fixtures() {
        let g = Grid::uniform(unit(), 1 << 10).unwrap();
        let f = SampledFunction::sample(g, |_| 1.0).unwrap();
        let plain = OrliczGauge::plain();

        let empty = SparseFamily::from_ids(unit(), vec![]);
        let a0 = sparse_avg_operator(&empty, &f, &plain).unwrap();
        assert!(a0.values().iter().all(|v| *v == 0.0));

        let single = SparseFamily::from_ids(unit(), vec![(0, 0)]);
        let a1 = sparse_avg_operator(&single, &f, &plain).unwrap();
        assert!(a1.values().iter().all(|v| *v == 1.0));

        // chain on the indicator: every average is 1, so A_S f = N
        let chain = SparseFamily::chain(unit(), 10);
        let a = sparse_avg_operator(&chain, &f, &plain).unwrap();
        let n = chain.counting_function().unwrap();
        for i in 0..n.n_cells() {
            let x = n.grid().cell(i).midpoint();
            assert_eq!(a.value_at(x).unwrap(), n.values()[i]);
        }
    }

    #[test]
    fn sparse_operator_monotone_in_the_family() {
        let g = Grid::uniform(unit(), 256).unwrap();
        let f = SampledFunction::sample(g, |x| 1.0 + x).unwrap();
        let plain = OrliczGauge::plain();
        let small = SparseFamily::from_ids(unit(), vec![(1, 0), (2, 2)]);
        let big = SparseFamily::from_ids(unit(), vec![(1, 0), (2, 2), (3, 7)]);
        let a = sparse_avg_operator(&small, &f, &plain).unwrap();
        let b = sparse_avg_operator(&big, &f, &plain).unwrap();
        for i in 0..b.n_cells() {
            let x = b.grid().cell(i).midpoint();
            assert!(b.values()[i] >= a.value_at(x).unwrap() - 1e-15);
        }
    }

    #[test]
    fn iterated_sparse_fixtures() {
        let g = Grid::uniform(unit(), 1 << 10).unwrap();
        let f = SampledFunction::sample(g, |_| 1.0).unwrap();

        let empty = SparseFamily::from_ids(unit(), vec![]);
        let single = SparseFamily::from_ids(unit(), vec![(0, 0)]);
        let z = iterated_sparse(&single, &empty, &f).unwrap();
        assert!(z.values().iter().all(|v| *v == 0.0));

        let one = iterated_sparse(&single, &single, &f).unwrap();
        assert!(one.values().iter().all(|v| *v == 1.0));

        // chain ∘ chain exceeds the single application on (0, 1/2)
        let chain = SparseFamily::chain(unit(), 8);
        let once = sparse_avg_operator(&chain, &f, &OrliczGauge::plain()).unwrap();
        let twice = iterated_sparse(&chain, &chain, &f).unwrap();
        let kp1 = 9.0;
        for i in 0..twice.n_cells() {
            let x = twice.grid().cell(i).midpoint();
            let single_val = once.value_at(x).unwrap();
            assert!(twice.values()[i] >= single_val.powi(2) / kp1 - 1e-12);
            if x < 0.5 {
                assert!(twice.values()[i] > single_val);
            }
        }
    }

    #[test]
    fn serialization_round_trips() {
        let chain = SparseFamily::chain(unit(), 6).greedy_witnesses().unwrap();
        let text = chain.to_text();
        assert!(text.starts_with("root_lo,root_hi\n"));
        let back = SparseFamily::from_text(&text).unwrap();
        assert_eq!(back.ids(), chain.ids());
        assert_eq!(back.root(), chain.root());
        assert_eq!(back.eta(), chain.eta());
        assert_eq!(back.witnesses(), chain.witnesses());

        let plain = SparseFamily::<f64>::from_ids(unit(), vec![(3, 5), (1, 0)]);
        let back = SparseFamily::<f64>::from_text(&plain.to_text()).unwrap();
        assert_eq!(back, plain);
    }
}
