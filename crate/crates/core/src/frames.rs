//! Finite atom structures `<S, T_i, E_ij>`, their complex algebras, the
//! frame conditions AS1-AS5 and point-form model checking.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::forms::{Color, FormInterner, Generator, NormalForm};
use crate::params::Variant;
use crate::term::{Equation, Term};

/// Complex algebras are materialized only up to this many nodes by default.
pub const DEFAULT_ALGEBRA_BOUND: usize = 16;

/// A finite model of type `cat_n`. Nodes are `0..len()`, each with a name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomStructure {
    n: usize,
    names: Vec<String>,
    t: Vec<BTreeSet<(usize, usize)>>,
    e: Vec<Vec<bool>>,
    pred: Vec<Vec<Vec<usize>>>,
    succ: Vec<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug)]
pub struct StructureBuilder {
    n: usize,
    names: Vec<String>,
    t: Vec<BTreeSet<(usize, usize)>>,
    e: Vec<Vec<bool>>,
}

impl StructureBuilder {
    pub fn new(n: usize) -> Self {
        StructureBuilder { n, names: Vec::new(), t: vec![BTreeSet::new(); n], e: vec![Vec::new(); n * n] }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn add_node(&mut self, name: impl Into<String>) -> usize {
        self.names.push(name.into());
        for row in &mut self.e {
            row.push(false);
        }
        self.names.len() - 1
    }

    pub fn add_pair(&mut self, i: usize, a: usize, b: usize) {
        self.t[i].insert((a, b));
    }

    pub fn remove_pair(&mut self, i: usize, a: usize, b: usize) {
        self.t[i].remove(&(a, b));
    }

    /// Relates every pair of the given nodes in direction `i`.
    pub fn add_clique(&mut self, i: usize, nodes: &[usize]) {
        for &a in nodes {
            for &b in nodes {
                self.t[i].insert((a, b));
            }
        }
    }

    pub fn set_e(&mut self, i: usize, j: usize, v: usize, member: bool) {
        self.e[i * self.n + j][v] = member;
    }

    /// Adds `(v, v)` to every relation.
    pub fn make_reflexive(&mut self) {
        for rel in &mut self.t {
            for v in 0..self.names.len() {
                rel.insert((v, v));
            }
        }
    }

    pub fn build(self) -> AtomStructure {
        let size = self.names.len();
        let mut pred = vec![vec![Vec::new(); size]; self.n];
        let mut succ = vec![vec![Vec::new(); size]; self.n];
        for (i, rel) in self.t.iter().enumerate() {
            for &(a, b) in rel {
                succ[i][a].push(b);
                pred[i][b].push(a);
            }
        }
        AtomStructure { n: self.n, names: self.names, t: self.t, e: self.e, pred, succ }
    }
}

impl AtomStructure {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn node_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|s| s == name)
    }

    pub fn pairs(&self, i: usize) -> &BTreeSet<(usize, usize)> {
        &self.t[i]
    }

    pub fn related(&self, i: usize, a: usize, b: usize) -> bool {
        self.t[i].contains(&(a, b))
    }

    pub fn in_e(&self, i: usize, j: usize, v: usize) -> bool {
        self.e[i * self.n + j][v]
    }

    pub fn e_members(&self, i: usize, j: usize) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.in_e(i, j, v)).collect()
    }

    /// Nodes `w` with `(w, v)` in `T_i`.
    pub fn pred(&self, i: usize, v: usize) -> &[usize] {
        &self.pred[i][v]
    }

    /// Nodes `w` with `(v, w)` in `T_i`.
    pub fn succ(&self, i: usize, v: usize) -> &[usize] {
        &self.succ[i][v]
    }

    pub fn to_builder(&self) -> StructureBuilder {
        StructureBuilder { n: self.n, names: self.names.clone(), t: self.t.clone(), e: self.e.clone() }
    }

    /// `T_i^*X = {y : exists x in X with (x, y) in T_i}`.
    pub fn cyl_image(&self, i: usize, set: &[bool]) -> Vec<bool> {
        let mut out = vec![false; self.len()];
        for (x, _) in set.iter().enumerate().filter(|(_, &b)| b) {
            for &y in self.succ(i, x) {
                out[y] = true;
            }
        }
        out
    }

    /// Nodes reachable from `v` through any of the relations, in either direction.
    pub fn component_of(&self, v: usize) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![v];
        seen[v] = true;
        while let Some(a) = stack.pop() {
            for i in 0..self.n {
                for &b in self.succ(i, a).iter().chain(self.pred(i, a)) {
                    if !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        (0..self.len()).filter(|&b| seen[b]).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.is_empty() || self.component_of(0).len() == self.len()
    }

    /// The set of nodes at which `t` holds in the complex algebra.
    pub fn evaluate(&self, t: &Term, e: &Valuation) -> Vec<bool> {
        let size = self.len();
        match t {
            Term::Zero => vec![false; size],
            Term::One => vec![true; size],
            Term::Diag(i, j) => self.e[i * self.n + j].clone(),
            Term::Var(l) => (0..size).map(|v| e.contains(*l, v)).collect(),
            Term::Neg(a) => self.evaluate(a, e).into_iter().map(|b| !b).collect(),
            Term::Cyl(i, a) => self.cyl_image(*i, &self.evaluate(a, e)),
            Term::And(a, b) => {
                self.evaluate(a, e).into_iter().zip(self.evaluate(b, e)).map(|(x, y)| x && y).collect()
            }
            Term::Or(a, b) => {
                self.evaluate(a, e).into_iter().zip(self.evaluate(b, e)).map(|(x, y)| x || y).collect()
            }
        }
    }

    fn check_node_count(&self, e: &Valuation) {
        debug_assert!(e.sets.iter().all(|s| s.len() == self.len()), "valuation size mismatch");
    }
}

/// Assignment of a node set to each free variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Valuation {
    sets: Vec<Vec<bool>>,
}

impl Valuation {
    pub fn empty(m: usize, size: usize) -> Self {
        Valuation { sets: vec![vec![false; size]; m] }
    }

    pub fn from_sets(sets: Vec<Vec<bool>>) -> Self {
        Valuation { sets }
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn contains(&self, l: usize, v: usize) -> bool {
        self.sets[l][v]
    }

    pub fn set(&mut self, l: usize, v: usize, member: bool) {
        self.sets[l][v] = member;
    }

    pub fn members(&self, l: usize) -> Vec<usize> {
        (0..self.sets[l].len()).filter(|&v| self.sets[l][v]).collect()
    }

    /// Appends nodes that belong to no variable.
    pub fn extend_to(&mut self, size: usize) {
        for s in &mut self.sets {
            s.resize(size, false);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    AS1,
    AS2,
    AS3,
    AS4,
    AS5,
}

impl Condition {
    pub fn for_variant(variant: Variant) -> [Condition; 4] {
        match variant {
            Variant::Nca => [Condition::AS1, Condition::AS2, Condition::AS3, Condition::AS5],
            Variant::Wca => [Condition::AS1, Condition::AS2, Condition::AS4, Condition::AS5],
        }
    }

    /// The axiom family the condition corresponds to.
    pub fn axiom(self) -> &'static str {
        match self {
            Condition::AS1 => "C2/C3",
            Condition::AS2 => "C5",
            Condition::AS3 => "C6",
            Condition::AS4 => "WC6",
            Condition::AS5 => "C7",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub clause: String,
    pub nodes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionResult {
    pub condition: Condition,
    pub violations: Vec<Violation>,
}

impl ConditionResult {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub variant: Variant,
    pub results: Vec<ConditionResult>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(ConditionResult::passed)
    }

    pub fn condition(&self, c: Condition) -> Option<&ConditionResult> {
        self.results.iter().find(|r| r.condition == c)
    }

    pub fn first_failure(&self) -> Option<(Condition, &Violation)> {
        self.results.iter().find_map(|r| r.violations.first().map(|v| (r.condition, v)))
    }
}

const MAX_VIOLATIONS: usize = 16;

struct Collector(Vec<Violation>);

impl Collector {
    fn push(&mut self, clause: impl FnOnce() -> String, nodes: Vec<usize>) {
        if self.0.len() < MAX_VIOLATIONS {
            self.0.push(Violation { clause: clause(), nodes });
        }
    }
}

/// Evaluates AS1, AS2, AS5 and, depending on the variant, AS3 or AS4.
///
/// AS3 and AS4 range over `i != j` and `k` outside `{i, j}`; the symmetry
/// clause `E_ij = E_ji` of AS4 is only imposed when such a `k` exists.
pub fn check_conditions(s: &AtomStructure, variant: Variant) -> ConditionReport {
    let results = Condition::for_variant(variant)
        .into_iter()
        .map(|condition| {
            let violations = match condition {
                Condition::AS1 => check_as1(s),
                Condition::AS2 => check_as2(s),
                Condition::AS3 => check_as3(s),
                Condition::AS4 => check_as4(s),
                Condition::AS5 => check_as5(s),
            };
            ConditionResult { condition, violations }
        })
        .collect();
    ConditionReport { variant, results }
}

fn check_as1(s: &AtomStructure) -> Vec<Violation> {
    let mut out = Collector(Vec::new());
    for i in 0..s.n {
        for v in 0..s.len() {
            if !s.related(i, v, v) {
                out.push(|| format!("T_{i} not reflexive"), vec![v]);
            }
        }
        for &(a, b) in s.pairs(i) {
            if !s.related(i, b, a) {
                out.push(|| format!("T_{i} not symmetric"), vec![a, b]);
            }
            for &c in s.succ(i, b) {
                if !s.related(i, a, c) {
                    out.push(|| format!("T_{i} not transitive"), vec![a, b, c]);
                }
            }
        }
    }
    out.0
}

fn check_as2(s: &AtomStructure) -> Vec<Violation> {
    let mut out = Collector(Vec::new());
    for i in 0..s.n {
        for v in 0..s.len() {
            if !s.in_e(i, i, v) {
                out.push(|| format!("E_{i}{i} != S"), vec![v]);
            }
        }
    }
    out.0
}

fn meet(a: &[bool], b: &[bool]) -> Vec<bool> {
    a.iter().zip(b).map(|(x, y)| *x && *y).collect()
}

fn off_diagonal(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
}

fn check_as3(s: &AtomStructure) -> Vec<Violation> {
    let n = s.n;
    let mut out = Collector(Vec::new());
    for (i, j) in off_diagonal(n) {
        for k in (0..n).filter(|&k| k != i && k != j) {
            let image = s.cyl_image(k, &meet(&s.e[i * n + k], &s.e[k * n + j]));
            for v in 0..s.len() {
                if image[v] != s.in_e(i, j, v) {
                    out.push(|| format!("E_{i}{j} != T_{k}*(E_{i}{k} & E_{k}{j})"), vec![v]);
                }
            }
        }
    }
    out.0
}

fn check_as4(s: &AtomStructure) -> Vec<Violation> {
    let n = s.n;
    let mut out = Collector(Vec::new());
    for (i, j) in off_diagonal(n) {
        let mut ks = (0..n).filter(|&k| k != i && k != j).peekable();
        if ks.peek().is_some() {
            for v in 0..s.len() {
                if s.in_e(i, j, v) != s.in_e(j, i, v) {
                    out.push(|| format!("E_{i}{j} != E_{j}{i}"), vec![v]);
                }
            }
        }
        for k in ks {
            for v in 0..s.len() {
                if s.in_e(i, k, v) && s.in_e(k, j, v) && !s.in_e(i, j, v) {
                    out.push(|| format!("E_{i}{k} & E_{k}{j} not within E_{i}{j}"), vec![v]);
                }
            }
            let image = s.cyl_image(k, &s.e[i * n + j]);
            for v in 0..s.len() {
                if image[v] != s.in_e(i, j, v) {
                    out.push(|| format!("E_{i}{j} != T_{k}*E_{i}{j}"), vec![v]);
                }
            }
        }
    }
    out.0
}

fn check_as5(s: &AtomStructure) -> Vec<Violation> {
    let mut out = Collector(Vec::new());
    for (i, j) in off_diagonal(s.n) {
        for &(a, b) in s.pairs(i) {
            if a != b && s.in_e(i, j, a) && s.in_e(i, j, b) {
                out.push(|| format!("T_{i} meets E_{i}{j} x E_{i}{j} off the identity"), vec![a, b]);
            }
        }
    }
    out.0
}

/// Explicit power-set algebra over a small structure. Elements are bit masks.
#[derive(Clone, Debug)]
pub struct FiniteAlgebra {
    n: usize,
    size: usize,
    cyl: Vec<Vec<u64>>,
    diag: Vec<u64>,
}

pub fn complex_algebra(s: &AtomStructure, bound: usize) -> Result<FiniteAlgebra> {
    let bound = bound.min(20);
    if s.len() > bound {
        return Err(Error::SizeBound(format!(
            "complex algebra over {} nodes exceeds the bound of {bound}",
            s.len()
        )));
    }
    let size = s.len();
    let succ_mask: Vec<Vec<u64>> = (0..s.n)
        .map(|i| (0..size).map(|v| s.succ(i, v).iter().fold(0u64, |m, &w| m | 1 << w)).collect())
        .collect();
    let cyl = succ_mask
        .iter()
        .map(|succ| {
            let mut table = vec![0u64; 1 << size];
            for x in 1..(1usize << size) {
                let low = x.trailing_zeros() as usize;
                table[x] = table[x & (x - 1)] | succ[low];
            }
            table
        })
        .collect();
    let diag = (0..s.n * s.n)
        .map(|idx| (0..size).filter(|&v| s.e[idx][v]).fold(0u64, |m, v| m | 1 << v))
        .collect();
    Ok(FiniteAlgebra { n: s.n, size, cyl, diag })
}

impl FiniteAlgebra {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn atoms(&self) -> usize {
        self.size
    }

    pub fn carrier_size(&self) -> usize {
        1 << self.size
    }

    pub fn top(&self) -> u64 {
        (1u64 << self.size) - 1
    }

    pub fn cyl(&self, i: usize, x: u64) -> u64 {
        self.cyl[i][x as usize]
    }

    pub fn diag(&self, i: usize, j: usize) -> u64 {
        self.diag[i * self.n + j]
    }

    /// Value of a term with variable `l` assigned `assignment[l]`.
    pub fn eval(&self, t: &Term, assignment: &[u64]) -> u64 {
        match t {
            Term::Zero => 0,
            Term::One => self.top(),
            Term::Diag(i, j) => self.diag(*i, *j),
            Term::Var(l) => assignment[*l],
            Term::Neg(a) => !self.eval(a, assignment) & self.top(),
            Term::Cyl(i, a) => self.cyl(*i, self.eval(a, assignment)),
            Term::And(a, b) => self.eval(a, assignment) & self.eval(b, assignment),
            Term::Or(a, b) => self.eval(a, assignment) | self.eval(b, assignment),
        }
    }
}

/// Whether the equation holds under every assignment of algebra elements to
/// its variables. `budget` bounds the number of assignments tried.
pub fn check_equation_bruteforce(a: &FiniteAlgebra, eq: &Equation, budget: u64) -> Result<bool> {
    let vars = eq.variable_count();
    let per_var = a.carrier_size() as u128;
    let total = per_var.checked_pow(vars as u32).unwrap_or(u128::MAX);
    if total > budget as u128 {
        return Err(Error::Budget(format!(
            "{total} assignments for {vars} variables over {} elements exceed {budget}",
            a.carrier_size()
        )));
    }
    let mut assignment = vec![0u64; vars];
    loop {
        if a.eval(&eq.lhs, &assignment) != a.eval(&eq.rhs, &assignment) {
            return Ok(false);
        }
        // odometer over the carrier
        let mut pos = 0;
        loop {
            if pos == vars {
                return Ok(true);
            }
            assignment[pos] += 1;
            if assignment[pos] < per_var as u64 {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
    }
}

/// The degree-0 color of a node: diagonals it lies in and variables containing it.
pub fn node_color(s: &AtomStructure, e: &Valuation, v: usize) -> Color {
    let n = s.n;
    let mut c = Color(0);
    for i in 0..n {
        for j in 0..n {
            if s.in_e(i, j, v) {
                c.insert(Generator::Diag(i, j), n);
            }
        }
    }
    for l in 0..e.m() {
        if e.contains(l, v) {
            c.insert(Generator::Var(l), n);
        }
    }
    c
}

/// Memoized point forms for one structure and valuation.
///
/// The degree-(h+1) form of `v` lists, in direction `i`, the degree-h forms
/// of the nodes `w` with `(w, v)` in `T_i`, matching `T_i^*`.
pub struct PointForms<'a> {
    s: &'a AtomStructure,
    e: &'a Valuation,
    levels: Vec<Vec<NormalForm>>,
    interner: FormInterner,
}

impl<'a> PointForms<'a> {
    pub fn new(s: &'a AtomStructure, e: &'a Valuation) -> Self {
        s.check_node_count(e);
        PointForms { s, e, levels: Vec::new(), interner: FormInterner::new() }
    }

    fn ensure(&mut self, h: usize) {
        while self.levels.len() <= h {
            let level = match self.levels.last() {
                None => (0..self.s.len())
                    .map(|v| self.interner.intern(NormalForm::atom(self.s.n, node_color(self.s, self.e, v))))
                    .collect(),
                Some(prev) => {
                    let degree = self.levels.len();
                    (0..self.s.len())
                        .map(|v| {
                            let subs = (0..self.s.n)
                                .map(|i| self.s.pred(i, v).iter().map(|&w| prev[w].clone()).collect())
                                .collect();
                            let color = prev[v].color();
                            self.interner.intern(NormalForm::new(degree, color, subs))
                        })
                        .collect()
                }
            };
            self.levels.push(level);
        }
    }

    pub fn form(&mut self, v: usize, h: usize) -> NormalForm {
        self.ensure(h);
        self.levels[h][v].clone()
    }

    pub fn models(&mut self, v: usize, f: &NormalForm) -> bool {
        f.dims() == self.s.n && self.form(v, f.degree()) == *f
    }
}

pub fn point_form(s: &AtomStructure, e: &Valuation, v: usize, h: usize) -> NormalForm {
    PointForms::new(s, e).form(v, h)
}

pub fn models(s: &AtomStructure, e: &Valuation, v: usize, f: &NormalForm) -> bool {
    PointForms::new(s, e).models(v, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::{family_instances, AxiomFamily};
    use crate::forms::reduce_degree;

    fn single_node(n: usize) -> AtomStructure {
        let mut b = StructureBuilder::new(n);
        let u = b.add_node("u");
        for i in 0..n {
            b.set_e(i, i, u, true);
        }
        b.make_reflexive();
        b.build()
    }

    #[test]
    fn single_reflexive_node_passes_everything() {
        let s = single_node(2);
        for v in Variant::ALL {
            let r = check_conditions(&s, v);
            assert!(r.passed(), "{v}: {r:?}");
        }
    }

    #[test]
    fn asymmetric_relation_fails_as1() {
        let mut b = StructureBuilder::new(2);
        let a = b.add_node("a");
        let c = b.add_node("b");
        for v in [a, c] {
            b.set_e(0, 0, v, true);
            b.set_e(1, 1, v, true);
        }
        b.make_reflexive();
        b.add_pair(0, a, c);
        let r = check_conditions(&b.build(), Variant::Nca);
        let as1 = r.condition(Condition::AS1).unwrap();
        assert!(!as1.passed());
        assert!(as1.violations.iter().any(|v| v.clause == "T_0 not symmetric" && v.nodes == vec![a, c]));
    }

    #[test]
    fn shared_diagonal_along_relation_fails_as5() {
        let mut b = StructureBuilder::new(2);
        let a = b.add_node("a");
        let c = b.add_node("b");
        for v in [a, c] {
            b.set_e(0, 0, v, true);
            b.set_e(1, 1, v, true);
            b.set_e(0, 1, v, true);
        }
        b.make_reflexive();
        b.add_clique(0, &[a, c]);
        let r = check_conditions(&b.build(), Variant::Wca);
        assert!(!r.condition(Condition::AS5).unwrap().passed());
        assert!(r.condition(Condition::AS1).unwrap().passed());
    }

    #[test]
    fn complex_algebra_of_single_node() {
        let s = single_node(2);
        let a = complex_algebra(&s, DEFAULT_ALGEBRA_BOUND).unwrap();
        assert_eq!(a.carrier_size(), 2);
        assert_eq!(a.cyl(0, 1), 1);
        assert_eq!(a.cyl(1, 0), 0);
    }

    #[test]
    fn full_relation_cylindrifies_to_top() {
        let mut b = StructureBuilder::new(2);
        let nodes: Vec<usize> = (0..5).map(|k| b.add_node(format!("n{k}"))).collect();
        b.add_clique(0, &nodes);
        b.make_reflexive();
        let a = complex_algebra(&b.build(), DEFAULT_ALGEBRA_BOUND).unwrap();
        assert_eq!(a.carrier_size(), 32);
        assert_eq!(a.cyl(0, 0), 0);
        for x in 1..32 {
            assert_eq!(a.cyl(0, x), a.top());
            assert_eq!(a.cyl(1, x), x);
        }
    }

    #[test]
    fn size_bound_is_enforced() {
        let mut b = StructureBuilder::new(2);
        for k in 0..5 {
            b.add_node(format!("n{k}"));
        }
        assert!(matches!(complex_algebra(&b.build(), 4), Err(Error::SizeBound(_))));
    }

    #[test]
    fn bruteforce_equations() {
        let mut s = single_node(2).to_builder();
        let extra = s.add_node("w");
        s.set_e(0, 0, extra, true);
        s.set_e(1, 1, extra, true);
        s.make_reflexive();
        let a = complex_algebra(&s.build(), DEFAULT_ALGEBRA_BOUND).unwrap();
        let c5 = &family_instances(AxiomFamily::C5, 2)[0];
        assert!(check_equation_bruteforce(&a, c5, 1000).unwrap());
        let c1 = &family_instances(AxiomFamily::C1, 2)[0];
        assert!(check_equation_bruteforce(&a, c1, 1000).unwrap());
        let assoc = &family_instances(AxiomFamily::C0, 2)[2];
        assert!(matches!(check_equation_bruteforce(&a, assoc, 10), Err(Error::Budget(_))));
    }

    #[test]
    fn c4_fails_on_non_commuting_three_node_frame() {
        // T_0 = {a,b}{c}, T_1 = {a}{b,c}
        let mut b = StructureBuilder::new(2);
        let nodes: Vec<usize> = ["a", "b", "c"].iter().map(|s| b.add_node(*s)).collect();
        for &v in &nodes {
            b.set_e(0, 0, v, true);
            b.set_e(1, 1, v, true);
        }
        b.add_clique(0, &[nodes[0], nodes[1]]);
        b.add_clique(1, &[nodes[1], nodes[2]]);
        b.make_reflexive();
        let s = b.build();
        assert!(check_conditions(&s, Variant::Nca).passed());
        let a = complex_algebra(&s, DEFAULT_ALGEBRA_BOUND).unwrap();
        let c4 = Equation::new(Term::cyl(0, Term::cyl(1, Term::var(0))), Term::cyl(1, Term::cyl(0, Term::var(0))));
        assert!(!check_equation_bruteforce(&a, &c4, 1000).unwrap());
    }

    #[test]
    fn point_forms_of_single_node() {
        let s = single_node(2);
        let mut e = Valuation::empty(1, 1);
        e.set(0, 0, true);
        let f0 = point_form(&s, &e, 0, 0);
        let names: Vec<String> = f0.color().generators(2).map(Generator::name).collect();
        assert_eq!(names, ["d_0_0", "d_1_1", "x_0"]);
        assert!(f0.all_subs().iter().all(Vec::is_empty));
        let f1 = point_form(&s, &e, 0, 1);
        assert_eq!(f1.color(), f0.color());
        assert_eq!(f1.subs(0), &[f0.clone()][..]);
        assert_eq!(f1.subs(1), &[f0.clone()][..]);
        assert!(models(&s, &e, 0, &f1));
        assert_eq!(reduce_degree(&f1, 0).unwrap(), f0);
    }

    #[test]
    fn missing_neighbour_is_not_modeled() {
        let mut b = StructureBuilder::new(2);
        let u = b.add_node("u");
        b.set_e(0, 0, u, true);
        b.set_e(1, 1, u, true);
        b.add_pair(1, u, u);
        let s = b.build();
        let e = Valuation::empty(0, 1);
        let f0 = point_form(&s, &e, u, 0);
        let f = NormalForm::new(1, f0.color(), vec![vec![f0.clone()], vec![f0]]);
        assert!(!models(&s, &e, u, &f));
    }

    #[test]
    fn evaluation_matches_algebra_tables() {
        let mut b = StructureBuilder::new(2);
        let nodes: Vec<usize> = (0..3).map(|k| b.add_node(format!("n{k}"))).collect();
        b.add_clique(0, &nodes[..2]);
        b.add_pair(1, nodes[2], nodes[0]);
        b.set_e(0, 1, nodes[1], true);
        let s = b.build();
        let mut e = Valuation::empty(1, 3);
        e.set(0, 2, true);
        let a = complex_algebra(&s, DEFAULT_ALGEBRA_BOUND).unwrap();
        let t = Term::or(Term::cyl(1, Term::var(0)), Term::cyl(0, Term::diag(0, 1)));
        let direct = s.evaluate(&t, &e);
        let mask = a.eval(&t, &[0b100]);
        for v in 0..3 {
            assert_eq!(direct[v], mask >> v & 1 == 1);
        }
    }
}
