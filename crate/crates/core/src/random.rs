//! Seeded generators of structures, valuations and terms for sampling and tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::frames::{check_conditions, AtomStructure, StructureBuilder, Valuation};
use crate::params::Params;
use crate::term::Term;

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random set partition of `0..size`, as a class index per element.
pub fn random_partition(size: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut classes = Vec::with_capacity(size);
    let mut count = 0;
    for _ in 0..size {
        let c = rng.random_range(0..=count);
        if c == count {
            count += 1;
        }
        classes.push(c);
    }
    classes
}

/// Equivalence relations from random partitions, `E_ii = S`, and each
/// off-diagonal `E_ij` membership drawn with probability `diag_prob`.
pub fn random_structure(n: usize, size: usize, diag_prob: f64, rng: &mut impl Rng) -> AtomStructure {
    let mut b = StructureBuilder::new(n);
    for v in 0..size {
        b.add_node(format!("s{v}"));
    }
    for i in 0..n {
        let classes = random_partition(size, rng);
        for a in 0..size {
            for c in 0..size {
                if classes[a] == classes[c] {
                    b.add_pair(i, a, c);
                }
            }
        }
    }
    for v in 0..size {
        for i in 0..n {
            for j in 0..n {
                b.set_e(i, j, v, i == j || rng.random_bool(diag_prob));
            }
        }
    }
    b.build()
}

/// Like [`random_structure`] but with occasional defects: dropped or extra
/// relation pairs and diagonal holes, so that every condition can fail.
pub fn random_perturbed_structure(n: usize, size: usize, rng: &mut impl Rng) -> AtomStructure {
    let base = random_structure(n, size, 0.3, rng);
    let mut b = base.to_builder();
    if rng.random_bool(0.3) {
        let i = rng.random_range(0..n);
        let pairs: Vec<(usize, usize)> = base.pairs(i).iter().copied().collect();
        let (a, c) = pairs[rng.random_range(0..pairs.len())];
        b.remove_pair(i, a, c);
    }
    if rng.random_bool(0.3) {
        let i = rng.random_range(0..n);
        b.add_pair(i, rng.random_range(0..size), rng.random_range(0..size));
    }
    if rng.random_bool(0.15) {
        let i = rng.random_range(0..n);
        b.set_e(i, i, rng.random_range(0..size), false);
    }
    b.build()
}

/// Rejection-samples a structure passing the variant's conditions.
pub fn random_valid_structure(
    p: &Params,
    max_nodes: usize,
    diag_prob: f64,
    tries: usize,
    rng: &mut impl Rng,
) -> Option<AtomStructure> {
    (0..tries).find_map(|_| {
        let size = rng.random_range(1..=max_nodes);
        let s = random_structure(p.n, size, diag_prob, rng);
        check_conditions(&s, p.variant).passed().then_some(s)
    })
}

pub fn random_valuation(m: usize, size: usize, rng: &mut impl Rng) -> Valuation {
    Valuation::from_sets((0..m).map(|_| (0..size).map(|_| rng.random_bool(0.5)).collect()).collect())
}

/// A random term with cylindrification depth at most `depth` and roughly
/// `size` connectives.
pub fn random_term(p: &Params, depth: usize, size: usize, rng: &mut impl Rng) -> Term {
    if size == 0 {
        return random_leaf(p, rng);
    }
    let choice = rng.random_range(0..if depth > 0 { 4 } else { 3 });
    match choice {
        0 => Term::neg(random_term(p, depth, size - 1, rng)),
        1 | 2 => {
            let left = rng.random_range(0..size);
            let a = random_term(p, depth, left, rng);
            let b = random_term(p, depth, size - 1 - left, rng);
            if choice == 1 {
                Term::and(a, b)
            } else {
                Term::or(a, b)
            }
        }
        _ => Term::cyl(rng.random_range(0..p.n), random_term(p, depth - 1, size - 1, rng)),
    }
}

fn random_leaf(p: &Params, rng: &mut impl Rng) -> Term {
    let kinds = if p.m > 0 { 4 } else { 3 };
    match rng.random_range(0..kinds) {
        0 => {
            if rng.random_bool(0.5) {
                Term::Zero
            } else {
                Term::One
            }
        }
        1 | 2 if p.m == 0 || rng.random_bool(0.5) => Term::diag(rng.random_range(0..p.n), rng.random_range(0..p.n)),
        _ => Term::var(rng.random_range(0..p.m.max(1))),
    }
}
