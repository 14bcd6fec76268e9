//! Deterministic fixture generators shared by the test and acceptance
//! suites: seeded RNG, random step functions, and the random sparse-family
//! distribution.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::dyadic::{build_lattice, CubeId, SparseFamily};
use crate::grid::{Grid, Interval, SampledFunction};
use crate::Real;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Uniform grid of random size in `1..=max_cells` with values uniform in
/// `(-amplitude, amplitude)`.
pub fn random_function<T: Real>(
    rng: &mut ChaCha8Rng,
    domain: Interval<T>,
    max_cells: usize,
    amplitude: f64,
) -> SampledFunction<T> {
    let n = rng.gen_range(1..=max_cells);
    let grid = Grid::uniform(domain, n).expect("valid grid");
    let values = (0..n)
        .map(|_| T::of(rng.gen_range(-amplitude..amplitude)))
        .collect();
    SampledFunction::new(grid, values).expect("finite values")
}

/// As [`random_function`] but with values in `[0, amplitude)`.
pub fn random_nonneg_function<T: Real>(
    rng: &mut ChaCha8Rng,
    domain: Interval<T>,
    max_cells: usize,
    amplitude: f64,
) -> SampledFunction<T> {
    let n = rng.gen_range(1..=max_cells);
    let grid = Grid::uniform(domain, n).expect("valid grid");
    let values = (0..n)
        .map(|_| T::of(rng.gen_range(0.0..amplitude)))
        .collect();
    SampledFunction::new(grid, values).expect("finite values")
}

/// Test distribution for sparse families: include each cube of the
/// depth-`depth` lattice independently with probability `p_incl`, then visit
/// the included cubes in seeded shuffled order and keep a cube only while
/// the running Carleson constant stays at most `lambda_cap`.
pub fn random_family<T: Real>(
    rng: &mut ChaCha8Rng,
    root: Interval<T>,
    depth: u32,
    p_incl: f64,
    lambda_cap: f64,
) -> SparseFamily<T> {
    let lattice = build_lattice(root, depth).expect("depth within bounds");
    let mut picked: Vec<CubeId> = lattice
        .iter()
        .filter(|_| rng.gen_range(0.0..1.0) < p_incl)
        .map(|c| c.id())
        .collect();
    // Fisher-Yates with the seeded rng
    for i in (1..picked.len()).rev() {
        let j = rng.gen_range(0..=i);
        picked.swap(i, j);
    }
    let cap = T::of(lambda_cap);
    let mut kept: Vec<CubeId> = Vec::new();
    for id in picked {
        kept.push(id);
        let fam = SparseFamily::from_ids(root, kept.clone());
        if fam.carleson_constant().expect("nonempty") > cap {
            kept.pop();
        }
    }
    SparseFamily::from_ids(root, kept)
}

/// [`random_family`] thinned to greedy-witnessability: cubes whose greedy
/// witness is empty are dropped in one pass. Removing a cube never shrinks
/// another cube's witness, so the surviving family certifies a positive
/// sparseness constant directly.
pub fn random_witnessed_family<T: Real>(
    rng: &mut ChaCha8Rng,
    root: Interval<T>,
    depth: u32,
    p_incl: f64,
    lambda_cap: f64,
) -> SparseFamily<T> {
    loop {
        let fam = random_family(rng, root, depth, p_incl, lambda_cap);
        if fam.is_empty() {
            continue;
        }
        let w = fam.greedy_witnesses().expect("nonempty");
        let witnesses = w.witnesses().expect("witnessed");
        let kept: Vec<CubeId> = w
            .ids()
            .iter()
            .copied()
            .filter(|id| {
                witnesses[id]
                    .iter()
                    .fold(T::zero(), |a, iv| a + iv.length())
                    > T::zero()
            })
            .collect();
        if kept.is_empty() {
            continue;
        }
        let thinned = SparseFamily::from_ids(root, kept)
            .greedy_witnesses()
            .expect("nonempty");
        assert!(thinned.eta().map(|e| e > T::zero()).unwrap_or(false));
        return thinned;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_given_seed() {
        let root = Interval::new(0.0, 1.0).unwrap();
        let a = random_family::<f64>(&mut rng(42), root, 6, 0.4, 4.0);
        let b = random_family::<f64>(&mut rng(42), root, 6, 0.4, 4.0);
        assert_eq!(a, b);
        let fa = random_function::<f64>(&mut rng(1), root, 32, 2.0);
        let fb = random_function::<f64>(&mut rng(1), root, 32, 2.0);
        assert_eq!(fa, fb);
    }

    #[test]
    fn thinned_families_respect_the_carleson_cap() {
        let root = Interval::new(0.0, 1.0).unwrap();
        let mut r = rng(5);
        for _ in 0..20 {
            let fam = random_family::<f64>(&mut r, root, 7, 0.5, 4.0);
            if !fam.is_empty() {
                assert!(fam.carleson_constant().unwrap() <= 4.0);
            }
        }
    }

    #[test]
    fn witnessed_families_are_valid() {
        let root = Interval::new(0.0, 1.0).unwrap();
        let mut r = rng(9);
        let fam = random_witnessed_family::<f64>(&mut r, root, 6, 0.3, 4.0);
        let eta = fam.eta().unwrap();
        assert!(eta > 0.0);
        let w = fam.witnesses().unwrap();
        // witnesses sit inside their cubes and are pairwise disjoint
        let mut all: Vec<(f64, f64)> = Vec::new();
        for (&id, parts) in w {
            let q = fam.cube(id).interval();
            for p in parts {
                assert!(q.contains_interval(p));
                all.push((p.lo(), p.hi()));
            }
        }
        all.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for pair in all.windows(2) {
            assert!(pair[0].1 <= pair[1].0 + 1e-15);
        }
    }
}
