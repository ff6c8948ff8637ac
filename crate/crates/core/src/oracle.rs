//! Exhaustive search over small atom structures: the independent ground
//! truth for satisfiability and for refuting equations.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::forms::{Color, NormalForm};
use crate::frames::{check_conditions, complex_algebra, AtomStructure, PointForms, StructureBuilder, Valuation};
use crate::params::{Params, Variant};

/// Default cap on the number of structures visited.
pub const DEFAULT_STEP_BUDGET: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchSpace {
    pub params: Params,
    pub max_nodes: usize,
    pub step_budget: u64,
}

impl SearchSpace {
    pub fn new(params: Params, max_nodes: usize) -> Self {
        SearchSpace { params, max_nodes, step_budget: DEFAULT_STEP_BUDGET }
    }
}

/// All set partitions of `0..size` as restricted growth strings.
pub fn set_partitions(size: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, max: usize, size: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == size {
            out.push(prefix.clone());
            return;
        }
        let limit = if prefix.is_empty() { 0 } else { max + 1 };
        for c in 0..=limit {
            prefix.push(c);
            go(prefix, max.max(c), size, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if size == 0 {
        out.push(Vec::new());
    } else {
        go(&mut Vec::new(), 0, size, &mut out);
    }
    out
}

/// Non-decreasing sequences of length `len` over `0..colors`.
fn sorted_sequences(len: usize, colors: u64) -> Vec<Vec<u64>> {
    fn go(prefix: &mut Vec<u64>, len: usize, colors: u64, out: &mut Vec<Vec<u64>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        let start = prefix.last().copied().unwrap_or(0);
        for c in start..colors {
            prefix.push(c);
            go(prefix, len, colors, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), len, colors, &mut out);
    out
}

/// Off-diagonal index pairs in the bit order used for node patterns.
fn off_diagonal(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect()
}

/// Enumeration constraints on the frames of one size.
struct FrameShape {
    n: usize,
    size: usize,
    /// Off-diagonal pattern forced on node 0.
    anchor: Option<u64>,
    /// Direction in which node 0 is related to nothing but itself.
    isolated: Option<usize>,
}

/// Frame candidates before they are built: one class vector per direction
/// and one off-diagonal pattern per node. Partitions make `T_i` an
/// equivalence relation and every node has all `d_ii`, so AS1 and AS2 hold
/// by construction; the remaining conditions are tested on the raw data.
struct Candidate<'a> {
    n: usize,
    classes: Vec<&'a [usize]>,
    pattern: &'a [u64],
    bit: &'a [Vec<usize>],
}

impl Candidate<'_> {
    fn e(&self, i: usize, j: usize, v: usize) -> bool {
        i == j || self.pattern[v] >> self.bit[i][j] & 1 == 1
    }

    /// Whether some `w` with `(v, w) ∈ T_k` satisfies `p`.
    fn exists_in_class(&self, k: usize, v: usize, p: impl Fn(usize) -> bool) -> bool {
        let c = self.classes[k];
        (0..self.pattern.len()).any(|w| c[w] == c[v] && p(w))
    }

    fn as3(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            (0..n).filter(|&j| j != i).all(|j| {
                (0..n).filter(|&k| k != i && k != j).all(|k| {
                    (0..self.pattern.len())
                        .all(|v| self.e(i, j, v) == self.exists_in_class(k, v, |w| self.e(i, k, w) && self.e(k, j, w)))
                })
            })
        })
    }

    fn as4(&self) -> bool {
        let n = self.n;
        let size = self.pattern.len();
        (0..n).all(|i| {
            (0..n).filter(|&j| j != i).all(|j| {
                (0..n).filter(|&k| k != i && k != j).all(|k| {
                    (0..size).all(|v| {
                        self.e(i, j, v) == self.e(j, i, v)
                            && (!(self.e(i, k, v) && self.e(k, j, v)) || self.e(i, j, v))
                            && self.e(i, j, v) == self.exists_in_class(k, v, |w| self.e(i, j, w))
                    })
                })
            })
        })
    }

    fn as5(&self) -> bool {
        let n = self.n;
        let size = self.pattern.len();
        (0..n).all(|i| {
            let c = self.classes[i];
            (0..n).filter(|&j| j != i).all(|j| {
                (0..size).all(|a| {
                    !self.e(i, j, a) || (a + 1..size).all(|b| c[a] != c[b] || !self.e(i, j, b))
                })
            })
        })
    }

    fn passes(&self, variant: Variant) -> bool {
        self.as5()
            && match variant {
                Variant::Nca => self.as3(),
                Variant::Wca => self.as4(),
            }
    }
}

/// Calls `visit` on every frame of the shape that passes the variant's
/// conditions; every `T_i` ranges over the set partitions, `E_ii = S`, and
/// the unconstrained nodes are ordered by their off-diagonal pattern.
/// Returns `false` if `visit` asked to stop.
fn for_each_frame(
    shape: &FrameShape,
    variant: Variant,
    steps: &mut u64,
    step_budget: u64,
    visit: &mut dyn FnMut(&AtomStructure) -> bool,
) -> Result<bool> {
    let FrameShape { n, size, anchor, isolated } = *shape;
    let off = off_diagonal(n);
    let colors = 1u64 << off.len();
    let all = set_partitions(size);
    // node 0 has class 0 in every restricted growth string
    let alone: Vec<Vec<usize>> = all.iter().filter(|c| c.iter().skip(1).all(|&x| x != 0)).cloned().collect();
    let partitions: Vec<&[Vec<usize>]> =
        (0..n).map(|i| if Some(i) == isolated { alone.as_slice() } else { all.as_slice() }).collect();
    let patterns: Vec<Vec<u64>> = match anchor {
        None => sorted_sequences(size, colors),
        Some(first) => sorted_sequences(size - 1, colors)
            .into_iter()
            .map(|rest| std::iter::once(first).chain(rest).collect())
            .collect(),
    };
    let mut bit = vec![vec![0; n]; n];
    for (idx, &(i, j)) in off.iter().enumerate() {
        bit[i][j] = idx;
    }
    let mut choice = vec![0usize; n];
    loop {
        for pattern in &patterns {
            *steps += 1;
            if *steps > step_budget {
                return Err(Error::Budget(format!(
                    "oracle step budget {step_budget} exhausted while searching structures with {size} nodes"
                )));
            }
            let classes = choice.iter().enumerate().map(|(i, &c)| partitions[i][c].as_slice()).collect();
            if !(Candidate { n, classes, pattern, bit: &bit }).passes(variant) {
                continue;
            }
            let mut b = StructureBuilder::new(n);
            for v in 0..size {
                b.add_node(format!("s{v}"));
            }
            for (i, &c) in choice.iter().enumerate() {
                let classes = &partitions[i][c];
                for a in 0..size {
                    for z in 0..size {
                        if classes[a] == classes[z] {
                            b.add_pair(i, a, z);
                        }
                    }
                }
            }
            for (v, &bits) in pattern.iter().enumerate() {
                for i in 0..n {
                    b.set_e(i, i, v, true);
                }
                for (idx, &(i, j)) in off.iter().enumerate() {
                    b.set_e(i, j, v, bits >> idx & 1 == 1);
                }
            }
            let s = b.build();
            if check_conditions(&s, variant).passed() && !visit(&s) {
                return Ok(false);
            }
        }
        let mut d = 0;
        while d < n {
            choice[d] += 1;
            if choice[d] < partitions[d].len() {
                break;
            }
            choice[d] = 0;
            d += 1;
        }
        if d == n {
            return Ok(true);
        }
    }
}

/// Calls `visit` on every structure with at most `max_nodes` nodes, up to
/// renaming, that passes the variant's conditions. Every `T_i` ranges over
/// the set partitions, `E_ii = S`, and nodes are ordered by their
/// off-diagonal membership pattern. `visit` returns `false` to stop early.
///
/// Returns the number of structures examined.
pub fn for_each_structure(sp: &SearchSpace, mut visit: impl FnMut(&AtomStructure) -> bool) -> Result<u64> {
    let mut steps = 0u64;
    for size in 1..=sp.max_nodes {
        let shape = FrameShape { n: sp.params.n, size, anchor: None, isolated: None };
        if !for_each_frame(&shape, sp.params.variant, &mut steps, sp.step_budget, &mut visit)? {
            break;
        }
    }
    Ok(steps)
}

/// A smallest structure of the class, with at most `max_nodes` nodes, in
/// which node 0 has the diagonal memberships of `color` and, if `isolated`
/// is given, is related in that direction to itself only.
///
/// Diagonal patterns that are not equivalence relations have no
/// representation tuple; such a structure supplies the neighbours AS3 asks
/// for instead.
pub fn find_support(
    p: &Params,
    color: Color,
    isolated: Option<usize>,
    max_nodes: usize,
    step_budget: u64,
) -> Result<Option<AtomStructure>> {
    let n = p.n;
    if (0..n).any(|i| !color.has_diag(i, i, n)) {
        return Ok(None);
    }
    let anchor = off_diagonal(n)
        .iter()
        .enumerate()
        .filter(|(_, &(i, j))| color.has_diag(i, j, n))
        .fold(0u64, |bits, (idx, _)| bits | 1 << idx);
    let mut steps = 0u64;
    let mut found = None;
    for size in 1..=max_nodes {
        let shape = FrameShape { n, size, anchor: Some(anchor), isolated };
        for_each_frame(&shape, p.variant, &mut steps, step_budget, &mut |s| {
            found = Some(s.clone());
            false
        })?;
        if found.is_some() {
            break;
        }
    }
    Ok(found)
}

/// Collects the structures (for small spaces and tests).
pub fn enumerate_structures(sp: &SearchSpace) -> Result<Vec<AtomStructure>> {
    let mut out = Vec::new();
    for_each_structure(sp, |s| {
        out.push(s.clone());
        true
    })?;
    Ok(out)
}

/// Largest number of valuation bits (`m * nodes`) the oracle will enumerate.
pub const MAX_VALUATION_BITS: usize = 24;

fn check_valuation_bits(sp: &SearchSpace) -> Result<()> {
    let bits = sp.params.m * sp.max_nodes;
    if bits > MAX_VALUATION_BITS {
        return Err(Error::Budget(format!(
            "oracle would enumerate 2^{bits} valuations (m = {}, {} nodes); the limit is 2^{MAX_VALUATION_BITS}",
            sp.params.m, sp.max_nodes
        )));
    }
    Ok(())
}

fn valuations(m: usize, size: usize) -> impl Iterator<Item = Valuation> {
    let bits = m * size;
    (0u64..1 << bits).map(move |mask| {
        Valuation::from_sets((0..m).map(|l| (0..size).map(|v| mask >> (l * size + v) & 1 == 1).collect()).collect())
    })
}

/// For each form, whether some structure in the space, valuation and node
/// realize it. One pass serves the whole batch.
pub fn oracle_classify(forms: &[NormalForm], sp: &SearchSpace) -> Result<Vec<bool>> {
    check_valuation_bits(sp)?;
    let mut found = vec![false; forms.len()];
    let degrees: Vec<usize> = {
        let mut d: Vec<usize> = forms.iter().map(NormalForm::degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    };
    let wanted: HashSet<&NormalForm> = forms.iter().collect();
    let mut hits: HashSet<NormalForm> = HashSet::new();
    let mut remaining = wanted.len();
    for_each_structure(sp, |s| {
        for e in valuations(sp.params.m, s.len()) {
            let mut pf = PointForms::new(s, &e);
            for v in 0..s.len() {
                for &h in &degrees {
                    let f = pf.form(v, h);
                    if wanted.contains(&f) && hits.insert(f) {
                        remaining -= 1;
                    }
                }
            }
        }
        remaining > 0
    })?;
    for (slot, f) in found.iter_mut().zip(forms) {
        *slot = hits.contains(f);
    }
    Ok(found)
}

/// A structure, valuation and node realizing `f`, if the space holds one.
pub fn oracle_find(f: &NormalForm, sp: &SearchSpace) -> Result<Option<(AtomStructure, Valuation, usize)>> {
    check_valuation_bits(sp)?;
    let mut hit = None;
    for_each_structure(sp, |s| {
        for e in valuations(sp.params.m, s.len()) {
            let mut pf = PointForms::new(s, &e);
            if let Some(v) = (0..s.len()).find(|&v| pf.models(v, f)) {
                hit = Some((s.clone(), e, v));
                return false;
            }
        }
        true
    })?;
    Ok(hit)
}

/// Whether some structure of the space realizes `f`; `false` only means
/// "not within the bound".
pub fn oracle_satisfiable(f: &NormalForm, sp: &SearchSpace) -> Result<bool> {
    Ok(oracle_classify(std::slice::from_ref(f), sp)?[0])
}

/// A structure of the class on which `c_i c_j X != c_j c_i X` for some `X`,
/// with the offending set as a node mask.
pub fn find_noncommuting(sp: &SearchSpace, i: usize, j: usize) -> Result<Option<(AtomStructure, u64)>> {
    let mut hit = None;
    for_each_structure(sp, |s| {
        let Ok(a) = complex_algebra(s, sp.max_nodes) else { return true };
        for x in 0..a.carrier_size() as u64 {
            if a.cyl(i, a.cyl(j, x)) != a.cyl(j, a.cyl(i, x)) {
                hit = Some((s.clone(), x));
                return false;
            }
        }
        true
    })?;
    Ok(hit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::Generator;

    #[test]
    fn partitions_follow_bell_numbers() {
        let bell: Vec<usize> = (0..=5).map(|k| set_partitions(k).len()).collect();
        assert_eq!(bell, [1, 1, 2, 5, 15, 52]);
    }

    #[test]
    fn candidate_check_matches_the_full_conditions() {
        let n = 3;
        let off = off_diagonal(n);
        let mut bit = vec![vec![0; n]; n];
        for (idx, &(i, j)) in off.iter().enumerate() {
            bit[i][j] = idx;
        }
        let all = set_partitions(2);
        let mut accepted = [0; 2];
        for (vi, variant) in Variant::ALL.into_iter().enumerate() {
            for pattern in sorted_sequences(2, 1 << off.len()) {
                for choice in 0..all.len().pow(n as u32) {
                    let classes: Vec<&[usize]> = (0..n).map(|i| all[choice / all.len().pow(i as u32) % all.len()].as_slice()).collect();
                    let mut b = StructureBuilder::new(n);
                    for v in 0..2 {
                        b.add_node(format!("s{v}"));
                        for i in 0..n {
                            b.set_e(i, i, v, true);
                        }
                        for (idx, &(i, j)) in off.iter().enumerate() {
                            b.set_e(i, j, v, pattern[v] >> idx & 1 == 1);
                        }
                    }
                    for (i, c) in classes.iter().enumerate() {
                        for a in 0..2 {
                            for z in 0..2 {
                                if c[a] == c[z] {
                                    b.add_pair(i, a, z);
                                }
                            }
                        }
                    }
                    let fast = Candidate { n, classes, pattern: &pattern, bit: &bit }.passes(variant);
                    assert_eq!(fast, check_conditions(&b.build(), variant).passed(), "{variant:?} {pattern:?} {choice}");
                    accepted[vi] += fast as usize;
                }
            }
        }
        assert!(accepted.iter().all(|&a| a > 0));
    }

    #[test]
    fn one_node_structures() {
        let p = Params::new(2, 0, Variant::Nca).unwrap();
        assert_eq!(enumerate_structures(&SearchSpace::new(p, 1)).unwrap().len(), 4);
    }

    #[test]
    fn two_node_relations_are_identity_or_full() {
        let p = Params::new(2, 0, Variant::Wca).unwrap();
        for s in enumerate_structures(&SearchSpace::new(p, 2)).unwrap() {
            assert!(check_conditions(&s, Variant::Wca).passed());
            for i in 0..2 {
                let k = s.pairs(i).len();
                assert!(k == s.len() || k == s.len() * s.len());
            }
        }
    }

    #[test]
    fn oracle_examples() {
        let p = Params::new(2, 1, Variant::Nca).unwrap();
        let sp = SearchSpace::new(p, 2);
        let gens = |g: &[Generator]| NormalForm::atom(2, Color::from_generators(g.iter().copied(), 2));
        let sat = gens(&[Generator::Diag(0, 0), Generator::Diag(1, 1), Generator::Var(0)]);
        assert!(oracle_satisfiable(&sat, &sp).unwrap());
        let (s, e, v) = oracle_find(&sat, &sp).unwrap().expect("model");
        assert!(PointForms::new(&s, &e).models(v, &sat));
        let unsat = gens(&[Generator::Diag(1, 1), Generator::Var(0)]);
        assert!(!oracle_satisfiable(&unsat, &sp).unwrap());
    }

    #[test]
    fn step_budget_is_reported() {
        let p = Params::new(2, 0, Variant::Nca).unwrap();
        let sp = SearchSpace { step_budget: 3, ..SearchSpace::new(p, 3) };
        assert!(matches!(enumerate_structures(&sp), Err(Error::Budget(_))));
    }

    #[test]
    fn valuation_blowup_is_a_budget_error() {
        let p = Params::new(2, 5, Variant::Nca).unwrap();
        let f = NormalForm::atom(2, Color::from_generators([Generator::Diag(0, 0), Generator::Diag(1, 1)], 2));
        assert!(matches!(oracle_find(&f, &SearchSpace::new(p, 5)), Err(Error::Budget(_))));
    }

    #[test]
    fn support_for_an_asymmetric_diagonal() {
        let p = Params::new(3, 0, Variant::Nca).unwrap();
        let gens = [Generator::Diag(0, 0), Generator::Diag(1, 1), Generator::Diag(2, 2), Generator::Diag(0, 1)];
        let color = Color::from_generators(gens, 3);
        let s = find_support(&p, color, None, 3, 1_000_000).unwrap().expect("support");
        assert_eq!(s.len(), 3);
        assert!(s.in_e(0, 1, 0) && !s.in_e(1, 0, 0));
        assert!(check_conditions(&s, Variant::Nca).passed());
        for isolated in 0..3 {
            if let Some(s) = find_support(&p, color, Some(isolated), 3, 1_000_000).unwrap() {
                assert_eq!(s.succ(isolated, 0), [0]);
            }
        }
        // a symmetric, transitive pattern is supported by the node itself
        let eq = Color::from_generators([Generator::Diag(0, 0), Generator::Diag(1, 1), Generator::Diag(2, 2)], 3);
        assert_eq!(find_support(&p, eq, Some(0), 3, 1_000_000).unwrap().unwrap().len(), 1);
        let no_d22 = Color::from_generators([Generator::Diag(0, 0), Generator::Diag(1, 1)], 3);
        assert!(find_support(&p, no_d22, None, 3, 1_000_000).unwrap().is_none());
    }

    #[test]
    fn noncommuting_frame_exists() {
        let p = Params::new(2, 0, Variant::Nca).unwrap();
        let (s, x) = find_noncommuting(&SearchSpace::new(p, 3), 0, 1).unwrap().expect("found");
        assert!(s.len() <= 3);
        let a = complex_algebra(&s, 3).unwrap();
        assert_ne!(a.cyl(0, a.cyl(1, x)), a.cyl(1, a.cyl(0, x)));
    }
}
