//! The finite witness structure `S^{tau,K}` of a normal form and the
//! satisfiability decision built on it.
//!
//! The root `u` carries the label `tau`. Every node `v` at level `l < k`
//! receives, for each direction `i` other than the one it was created in
//! (all directions for the root), one fresh child per member of `sub_i(L(v))`
//! that survives the diagonal filter; `v` and those children form a single
//! `T_i`-clique. For NCA, every representable last-level node is extended by
//! the closure of a representation tuple under the substitutions `C_k^{i,j}`.
//! Last-level nodes whose diagonal pattern has no representation tuple can
//! be given a small support structure instead (see [`attach_support`]).

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::forms::{validate_form, Color, Generator, NormalForm};
use crate::frames::{check_conditions, AtomStructure, ConditionReport, PointForms, StructureBuilder, Valuation};
use crate::oracle::find_support;
use crate::params::{Params, Variant};

/// A sequence of length `n` over abstract points.
pub type RepTuple = Vec<usize>;

/// `C_k^{i,j} f`: copy `f(i)` into position `k` when `k` is outside `{i, j}`
/// and `f(i) = f(j)`; otherwise `f` unchanged.
pub fn apply_c(f: &[usize], i: usize, j: usize, k: usize) -> RepTuple {
    let mut g = f.to_vec();
    if k != i && k != j && f[i] == f[j] {
        g[k] = f[i];
    }
    g
}

/// `g ≡_i h` iff the tuples agree everywhere except possibly at `i`.
pub fn equiv_except(g: &[usize], h: &[usize], i: usize) -> bool {
    g.iter().zip(h).enumerate().all(|(j, (a, b))| j == i || a == b)
}

/// Least superset of `seeds` closed under every `C_k^{i,j}`.
pub fn rep_closure(seeds: &[RepTuple]) -> BTreeSet<RepTuple> {
    let mut closed: BTreeSet<RepTuple> = seeds.iter().cloned().collect();
    let mut queue: VecDeque<RepTuple> = closed.iter().cloned().collect();
    while let Some(f) = queue.pop_front() {
        let n = f.len();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let g = apply_c(&f, i, j, k);
                    if closed.insert(g.clone()) {
                        queue.push_back(g);
                    }
                }
            }
        }
    }
    closed
}

/// A tuple realizing the diagonal pattern of `color` with at most `n - 1`
/// distinct points, drawn from `first_point` upwards.
///
/// Exists iff `{(i, j) : d_ij in color}` is an equivalence relation on `n`
/// with fewer than `n` classes.
pub fn representation(color: Color, n: usize, first_point: usize) -> Option<RepTuple> {
    let mut class: Vec<Option<usize>> = vec![None; n];
    let mut classes = 0;
    for i in 0..n {
        if class[i].is_none() {
            class[i] = Some(classes);
            for j in i + 1..n {
                if color.has_diag(i, j, n) {
                    class[j] = Some(classes);
                }
            }
            classes += 1;
        }
    }
    let f: RepTuple = class.iter().map(|c| first_point + c.unwrap_or(0)).collect();
    let consistent = (0..n).all(|i| (0..n).all(|j| (f[i] == f[j]) == color.has_diag(i, j, n)));
    (consistent && classes < n).then_some(f)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeKind {
    /// A labeled node at level `level`; `parent` is `(node, direction)` for
    /// everything but the root.
    Labeled { level: usize, label: NormalForm, parent: Option<(usize, usize)> },
    /// A member of `Rep(owner)` other than the owner's own tuple.
    Rep { owner: usize, tuple: RepTuple },
    /// A node of the support structure attached to a last-level node whose
    /// diagonal pattern has no representation tuple.
    Support { owner: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WitnessOptions {
    /// Skip children whose color shares an off-diagonal `d_ij` with the parent.
    pub diagonal_filter: bool,
    /// For NCA, when the construction fails, retry with support structures
    /// attached to last-level nodes whose diagonal pattern has no
    /// representation tuple.
    pub support: bool,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions { diagonal_filter: true, support: true }
    }
}

#[derive(Clone, Debug)]
pub struct WitnessStructure {
    pub params: Params,
    pub structure: AtomStructure,
    pub valuation: Valuation,
    pub root: usize,
    pub degree: usize,
    pub kinds: Vec<NodeKind>,
    /// Representation tuples chosen for representable last-level nodes.
    pub representations: Vec<(usize, RepTuple)>,
}

impl WitnessStructure {
    pub fn label(&self, v: usize) -> Option<&NormalForm> {
        match &self.kinds[v] {
            NodeKind::Labeled { label, .. } => Some(label),
            NodeKind::Rep { .. } | NodeKind::Support { .. } => None,
        }
    }

    pub fn level(&self, v: usize) -> Option<usize> {
        match &self.kinds[v] {
            NodeKind::Labeled { level, .. } => Some(*level),
            NodeKind::Rep { .. } | NodeKind::Support { .. } => None,
        }
    }

    pub fn parent(&self, v: usize) -> Option<(usize, usize)> {
        match &self.kinds[v] {
            NodeKind::Labeled { parent, .. } => *parent,
            NodeKind::Rep { .. } | NodeKind::Support { .. } => None,
        }
    }

    pub fn labeled_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.kinds.len()).filter(|&v| self.label(v).is_some())
    }

    /// Nodes of `S_{-1}`.
    pub fn rep_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.kinds.len()).filter(|&v| matches!(self.kinds[v], NodeKind::Rep { .. }))
    }

    /// Nodes of attached support structures.
    pub fn support_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.kinds.len()).filter(|&v| matches!(self.kinds[v], NodeKind::Support { .. }))
    }

    /// `levels()[l]` lists `S_l`.
    pub fn levels(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.degree + 1];
        for v in self.labeled_nodes() {
            out[self.level(v).unwrap_or(0)].push(v);
        }
        out
    }

    /// Children of `v` created in direction `i`.
    pub fn children(&self, v: usize, i: usize) -> Vec<usize> {
        (0..self.kinds.len()).filter(|&w| self.parent(w) == Some((v, i))).collect()
    }
}

struct Builder {
    n: usize,
    structure: StructureBuilder,
    kinds: Vec<NodeKind>,
}

impl Builder {
    fn add_labeled(&mut self, level: usize, label: NormalForm, parent: Option<(usize, usize)>) -> usize {
        let name = if parent.is_none() { "u".to_string() } else { format!("w{}", self.kinds.len()) };
        let v = self.structure.add_node(name);
        self.kinds.push(NodeKind::Labeled { level, label, parent });
        v
    }

    fn add_rep(&mut self, owner: usize, tuple: RepTuple) -> usize {
        let points: Vec<String> = tuple.iter().map(|p| format!("p{p}")).collect();
        let v = self.structure.add_node(format!("r{}({})", self.kinds.len(), points.join(",")));
        self.kinds.push(NodeKind::Rep { owner, tuple });
        v
    }
}

/// Whether the diagonal filter keeps `sigma` as a direction-`i` child of a
/// node colored `parent`.
pub fn passes_filter(sigma: &NormalForm, parent: Color, i: usize, n: usize) -> bool {
    (0..n).filter(|&j| j != i).all(|j| !(sigma.color().has_diag(i, j, n) && parent.has_diag(i, j, n)))
}

/// Builds `S^{tau,K}` for the variant in `p`.
pub fn build_witness(tau: &NormalForm, p: &Params, options: WitnessOptions) -> Result<WitnessStructure> {
    let diagnostics = validate_form(tau, p);
    if !diagnostics.is_valid() {
        return Err(Error::InvalidForm(diagnostics.0.join("; ")));
    }
    let n = p.n;
    let k = tau.degree();
    let mut b = Builder { n, structure: StructureBuilder::new(n), kinds: Vec::new() };
    let root = b.add_labeled(0, tau.clone(), None);

    let mut frontier = vec![root];
    for level in 0..k {
        let mut next = Vec::new();
        for &v in &frontier {
            let (label, created_in) = match &b.kinds[v] {
                NodeKind::Labeled { label, parent, .. } => (label.clone(), parent.map(|(_, d)| d)),
                NodeKind::Rep { .. } | NodeKind::Support { .. } => unreachable!("frontier holds labeled nodes only"),
            };
            for i in (0..n).filter(|&i| Some(i) != created_in) {
                let mut clique = vec![v];
                for sigma in label.subs(i) {
                    if options.diagonal_filter && !passes_filter(sigma, label.color(), i, n) {
                        continue;
                    }
                    let w = b.add_labeled(level + 1, sigma.clone(), Some((v, i)));
                    clique.push(w);
                    next.push(w);
                }
                b.structure.add_clique(i, &clique);
            }
        }
        frontier = next;
    }

    let mut representations = Vec::new();
    if p.variant == Variant::Nca {
        let mut next_point = 0;
        for &v in &frontier {
            let NodeKind::Labeled { label, parent, .. } = b.kinds[v].clone() else { continue };
            let Some(f) = representation(label.color(), n, next_point) else { continue };
            next_point = f.iter().max().map_or(next_point, |m| m + 1);
            let closure = rep_closure(std::slice::from_ref(&f));
            let created_in = parent.map(|(_, d)| d);
            let members: Vec<(usize, RepTuple)> =
                closure.into_iter().filter(|g| *g != f).map(|g| (b.add_rep(v, g.clone()), g)).collect();
            for i in 0..n {
                for (x, g) in &members {
                    for (y, h) in &members {
                        if equiv_except(g, h, i) {
                            b.structure.add_pair(i, *x, *y);
                        }
                    }
                    if Some(i) != created_in && equiv_except(g, &f, i) {
                        b.structure.add_pair(i, *x, v);
                        b.structure.add_pair(i, v, *x);
                    }
                }
            }
            representations.push((v, f));
        }
    }

    let size = b.kinds.len();
    let mut valuation = Valuation::empty(p.m, size);
    for v in 0..size {
        match &b.kinds[v] {
            NodeKind::Labeled { label, .. } => {
                let c = label.color();
                for i in 0..n {
                    for j in 0..n {
                        b.structure.set_e(i, j, v, c.has_diag(i, j, n));
                    }
                }
                for l in 0..p.m {
                    valuation.set(l, v, c.has_var(l, n));
                }
            }
            NodeKind::Rep { tuple, .. } => {
                for i in 0..n {
                    for j in 0..n {
                        b.structure.set_e(i, j, v, tuple[i] == tuple[j]);
                    }
                }
            }
            NodeKind::Support { .. } => unreachable!("support is attached after construction"),
        }
    }
    b.structure.make_reflexive();
    debug_assert_eq!(b.n, n);
    Ok(WitnessStructure {
        params: *p,
        structure: b.structure.build(),
        valuation,
        root,
        degree: k,
        kinds: b.kinds,
        representations,
    })
}

/// Outcome of the satisfiability check together with its evidence.
#[derive(Clone, Debug)]
pub struct SatResult {
    pub satisfiable: bool,
    pub witness: WitnessStructure,
    pub conditions: ConditionReport,
    /// Labeled nodes that do not satisfy their label.
    pub unmodeled: Vec<usize>,
}

impl SatResult {
    fn node_ref(&self, v: usize) -> String {
        if v == self.witness.root {
            "root".to_string()
        } else {
            format!("node {}", self.witness.structure.name(v))
        }
    }

    /// One-line explanation of the first failure, if any.
    pub fn failure(&self) -> Option<String> {
        if let Some((condition, violation)) = self.conditions.first_failure() {
            let at = violation.nodes.first().map_or_else(|| "root".to_string(), |&v| self.node_ref(v));
            return Some(format!("{condition}/{} violation at {at}", condition.axiom()));
        }
        self.unmodeled.first().map(|&v| format!("label not realized at {}", self.node_ref(v)))
    }

    pub fn summary(&self) -> String {
        match self.failure() {
            None => "satisfiable".to_string(),
            Some(reason) => format!("unsatisfiable: {reason}"),
        }
    }
}

/// Labeled nodes of the witness that fail their label.
pub fn unmodeled_nodes(w: &WitnessStructure) -> Vec<usize> {
    let mut forms = PointForms::new(&w.structure, &w.valuation);
    w.labeled_nodes().filter(|&v| !forms.models(v, w.label(v).expect("labeled"))).collect()
}

/// Largest support structure searched for, in nodes.
pub const SUPPORT_MAX_NODES: usize = 3;
/// Step budget of one support search.
pub const SUPPORT_STEP_BUDGET: u64 = 2_000_000;

type SupportKey = (usize, Variant, Color, Option<usize>);

/// Support searches depend only on the diagonal pattern and the blocked
/// direction, so their results are shared across calls.
fn cached_support(p: &Params, color: Color, isolated: Option<usize>) -> Option<AtomStructure> {
    static CACHE: OnceLock<Mutex<HashMap<SupportKey, Option<AtomStructure>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let diagonals = color.generators(p.n).filter(|g| matches!(g, Generator::Diag(..)));
    let key = (p.n, p.variant, Color::from_generators(diagonals, p.n), isolated);
    if let Some(hit) = cache.lock().expect("support cache poisoned").get(&key) {
        return hit.clone();
    }
    // an exhausted budget means "none found", like an empty search
    let found = find_support(p, color, isolated, SUPPORT_MAX_NODES, SUPPORT_STEP_BUDGET).ok().flatten();
    cache.lock().expect("support cache poisoned").insert(key, found.clone());
    found
}

/// Whether a diagonal pattern has off-diagonal members but no representation
/// tuple, so that nothing in the construction provides the neighbours AS3
/// asks for.
pub fn needs_support(color: Color, n: usize) -> bool {
    !color.is_diagonal_free(n) && representation(color, n, 0).is_none()
}

/// The witness with a support structure attached to every last-level node
/// that [`needs_support`]. A support structure is found by exhaustive search
/// over small frames of the class; its anchor is identified with the node
/// and joins the node's classes in every direction except the one the node
/// was created in. `None` if no node needs support or some support search
/// fails.
pub fn attach_support(w: &WitnessStructure) -> Option<WitnessStructure> {
    let p = &w.params;
    let n = p.n;
    let leaves: Vec<(usize, Color, Option<usize>)> = w
        .labeled_nodes()
        .filter(|&v| w.level(v) == Some(w.degree))
        .map(|v| (v, w.label(v).expect("labeled").color(), w.parent(v).map(|(_, d)| d)))
        .filter(|&(_, c, _)| needs_support(c, n))
        .collect();
    if leaves.is_empty() {
        return None;
    }
    let mut b = w.structure.to_builder();
    let mut kinds = w.kinds.clone();
    for (v, color, created_in) in leaves {
        let g = cached_support(p, color, created_in)?;
        let map: Vec<usize> = (0..g.len())
            .map(|a| {
                if a == 0 {
                    return v;
                }
                let x = b.add_node(format!("g{}", kinds.len()));
                kinds.push(NodeKind::Support { owner: v });
                for i in 0..n {
                    for j in 0..n {
                        b.set_e(i, j, x, g.in_e(i, j, a));
                    }
                }
                x
            })
            .collect();
        for i in 0..n {
            for &(a, c) in g.pairs(i) {
                b.add_pair(i, map[a], map[c]);
            }
        }
    }
    b.make_reflexive();
    let structure = b.build();
    let mut valuation = w.valuation.clone();
    valuation.extend_to(structure.len());
    Some(WitnessStructure { structure, valuation, kinds, ..w.clone() })
}

fn evaluate(witness: WitnessStructure) -> SatResult {
    let conditions = check_conditions(&witness.structure, witness.params.variant);
    let unmodeled = unmodeled_nodes(&witness);
    let satisfiable = conditions.passed() && unmodeled.is_empty();
    SatResult { satisfiable, witness, conditions, unmodeled }
}

pub fn is_satisfiable_with(tau: &NormalForm, p: &Params, options: WitnessOptions) -> Result<SatResult> {
    let literal = evaluate(build_witness(tau, p, options)?);
    if literal.satisfiable || !options.support || p.variant != Variant::Nca {
        return Ok(literal);
    }
    match attach_support(&literal.witness).map(evaluate) {
        Some(supported) if supported.satisfiable => Ok(supported),
        _ => Ok(literal),
    }
}

/// `tau` is nonzero in the free algebra iff its witness lies in the class
/// and every labeled node realizes its label.
///
/// For NCA, a failed construction is retried with support structures (see
/// [`attach_support`]); a positive answer always comes with a structure
/// that passed the full verification.
pub fn is_satisfiable(tau: &NormalForm, p: &Params) -> Result<SatResult> {
    is_satisfiable_with(tau, p, WitnessOptions::default())
}
