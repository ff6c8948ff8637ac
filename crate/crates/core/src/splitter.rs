//! Splitting satisfiable forms below `t = prod{-d_ij : i != j}` into two
//! disjoint satisfiable forms, which shows that no atom lies below `t`.
//!
//! For a satisfiable diagonal-free `tau` of degree `k`, walk a chain
//! `v_0 .. v_k` down the witness alternating directions 0 and 1, then attach
//! to `v_k` fresh tuples over `n` new points in which two positions coincide.
//! The degree-`(k + 1)` point forms of the root before and after the
//! extension are both below `tau`, both satisfiable, and distinct.

use rand::Rng;

use crate::error::{Error, Result};
use crate::forms::{reduce_degree, validate_form, Color, Generator, NormalForm};
use crate::frames::{check_conditions, point_form, AtomStructure, ConditionReport, PointForms, Valuation};
use crate::params::Params;
use crate::random::{random_structure, random_valid_structure, random_valuation, rng_from_seed};
use crate::witness::{equiv_except, is_satisfiable, rep_closure, unmodeled_nodes, RepTuple, WitnessStructure};

/// Nodes `v_0, .., v_k` with `(v_q, v_{q+1})` in `T_{q mod 2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub nodes: Vec<usize>,
    pub labels: Vec<NormalForm>,
}

impl Chain {
    pub fn last(&self) -> usize {
        *self.nodes.last().expect("chains are nonempty")
    }

    /// Degree of the root label.
    pub fn degree(&self) -> usize {
        self.nodes.len() - 1
    }
}

/// Whether the form lies below `t`, i.e. has no positive `d_ij` with `i != j`.
pub fn below_t(f: &NormalForm) -> bool {
    f.color().is_diagonal_free(f.dims())
}

fn require_below_t(f: &NormalForm) -> Result<()> {
    if below_t(f) {
        return Ok(());
    }
    let n = f.dims();
    let positive: Vec<String> = f
        .color()
        .generators(n)
        .filter(|g| matches!(g, Generator::Diag(i, j) if i != j))
        .map(Generator::name)
        .collect();
    Err(Error::Precondition(format!("form is not below t: color contains {}", positive.join(", "))))
}

pub fn build_chain(w: &WitnessStructure) -> Result<Chain> {
    let tau = w.label(w.root).expect("root is labeled").clone();
    require_below_t(&tau)?;
    let conditions = check_conditions(&w.structure, w.params.variant);
    if !conditions.passed() || !unmodeled_nodes(w).is_empty() {
        return Err(Error::Precondition("form is unsatisfiable".into()));
    }
    let k = tau.degree();
    let mut nodes = vec![w.root];
    let mut labels = vec![tau];
    for q in 0..k {
        let dir = q % 2;
        let target = reduce_degree(&labels[q], k - q - 1)?;
        let next = w
            .children(nodes[q], dir)
            .into_iter()
            .find(|&c| w.label(c) == Some(&target))
            .ok_or_else(|| Error::Verification(format!("no direction-{dir} child of chain node {q} carries {target}")))?;
        nodes.push(next);
        labels.push(target);
    }
    Ok(Chain { nodes, labels })
}

/// The witness extended by tuples over fresh points attached to the chain end.
#[derive(Clone, Debug)]
pub struct ExtendedStructure {
    pub structure: AtomStructure,
    pub valuation: Valuation,
    /// The tuple identified with the chain end.
    pub anchor: RepTuple,
    /// The added nodes with their tuples.
    pub added: Vec<(usize, RepTuple)>,
    /// Direction in which the chain end sees the added part.
    pub direction: usize,
}

/// Extends the witness around `v_k`.
///
/// With `d = k mod 2`, the seed tuple is `f = (f_0, .., f_{n-1})` with
/// position `d` overwritten by `f_{1-d}`; the closure of `{f, seed}` minus
/// `f` is added. In direction `d` the chain end joins the tuples that agree
/// with `f` off position `d`; otherwise tuples are related among themselves
/// by agreement off the direction.
pub fn extend_plus(w: &WitnessStructure, ch: &Chain) -> ExtendedStructure {
    let n = w.params.n;
    let k = ch.degree();
    let d = k % 2;
    let vk = ch.last();
    let first_point = w.representations.iter().flat_map(|(_, f)| f.iter().copied()).max().map_or(0, |p| p + 1);
    let f: RepTuple = (first_point..first_point + n).collect();
    let mut seed = f.clone();
    seed[d] = f[1 - d];
    let closure = rep_closure(&[f.clone(), seed]);

    let s = &w.structure;
    let mut b = s.to_builder();
    let added: Vec<(usize, RepTuple)> = closure
        .into_iter()
        .filter(|g| *g != f)
        .map(|g| {
            let points: Vec<String> = g.iter().map(|p| format!("q{p}")).collect();
            (b.add_node(format!("t{}({})", b.len(), points.join(","))), g)
        })
        .collect();
    let anchor_class: Vec<usize> = s.succ(d, vk).to_vec();
    for i in 0..n {
        for (x, g) in &added {
            for (y, h) in &added {
                if equiv_except(g, h, i) {
                    b.add_pair(i, *x, *y);
                }
            }
            if i == d && equiv_except(g, &f, d) {
                for &c in &anchor_class {
                    b.add_pair(d, *x, c);
                    b.add_pair(d, c, *x);
                }
            }
        }
    }
    for (x, g) in &added {
        for i in 0..n {
            for j in 0..n {
                b.set_e(i, j, *x, g[i] == g[j]);
            }
        }
    }
    b.make_reflexive();
    let structure = b.build();
    let mut valuation = w.valuation.clone();
    valuation.extend_to(structure.len());
    ExtendedStructure { structure, valuation, anchor: f, added, direction: d }
}

/// Evidence that a form is realized: a structure in the class and a node.
#[derive(Clone, Debug)]
pub struct Realization {
    pub node: usize,
    pub conditions: ConditionReport,
    /// Labeled witness nodes that fail their label in this structure.
    pub unmodeled: Vec<usize>,
    /// Outcome of the independent witness construction for the form.
    pub witness_satisfiable: Option<bool>,
}

impl Realization {
    pub fn verified(&self) -> bool {
        self.conditions.passed() && self.unmodeled.is_empty() && self.witness_satisfiable != Some(false)
    }
}

#[derive(Clone, Debug)]
pub struct SplitResult {
    pub tau: NormalForm,
    pub sigma: NormalForm,
    pub gamma: NormalForm,
    pub chain: Chain,
    pub witness: WitnessStructure,
    pub extended: ExtendedStructure,
    pub sigma_certificate: Realization,
    pub gamma_certificate: Realization,
    /// Whether the chain nodes' point forms one degree above their labels
    /// differ between the two structures, for `q = 0..=k`.
    pub divergence: Vec<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitOptions {
    /// Also decide both outputs with their own witnesses.
    pub recheck_outputs: bool,
}

impl Default for SplitOptions {
    fn default() -> Self {
        SplitOptions { recheck_outputs: true }
    }
}

pub fn split_atom(tau: &NormalForm, p: &Params) -> Result<SplitResult> {
    split_atom_with(tau, p, SplitOptions::default())
}

pub fn split_atom_with(tau: &NormalForm, p: &Params, options: SplitOptions) -> Result<SplitResult> {
    let diagnostics = validate_form(tau, p);
    if !diagnostics.is_valid() {
        return Err(Error::InvalidForm(diagnostics.0.join("; ")));
    }
    require_below_t(tau)?;
    let sat = is_satisfiable(tau, p)?;
    if !sat.satisfiable {
        return Err(Error::Precondition(format!("form is {}", sat.summary())));
    }
    let witness = sat.witness;
    let chain = build_chain(&witness)?;
    let extended = extend_plus(&witness, &chain);
    let k = chain.degree();

    let sigma = point_form(&witness.structure, &witness.valuation, witness.root, k + 1);
    let gamma = point_form(&extended.structure, &extended.valuation, witness.root, k + 1);

    let mut base_forms = PointForms::new(&witness.structure, &witness.valuation);
    let mut plus_forms = PointForms::new(&extended.structure, &extended.valuation);
    let divergence = chain
        .nodes
        .iter()
        .enumerate()
        .map(|(q, &v)| base_forms.form(v, k - q + 1) != plus_forms.form(v, k - q + 1))
        .collect();
    let plus_unmodeled =
        witness.labeled_nodes().filter(|&v| !plus_forms.models(v, witness.label(v).expect("labeled"))).collect();

    let recheck = |f: &NormalForm| -> Result<Option<bool>> {
        Ok(if options.recheck_outputs { Some(is_satisfiable(f, p)?.satisfiable) } else { None })
    };
    let sigma_certificate = Realization {
        node: witness.root,
        conditions: sat.conditions,
        unmodeled: sat.unmodeled,
        witness_satisfiable: recheck(&sigma)?,
    };
    let gamma_certificate = Realization {
        node: witness.root,
        conditions: check_conditions(&extended.structure, p.variant),
        unmodeled: plus_unmodeled,
        witness_satisfiable: recheck(&gamma)?,
    };
    let result = SplitResult {
        tau: tau.clone(),
        sigma,
        gamma,
        chain,
        witness,
        extended,
        sigma_certificate,
        gamma_certificate,
        divergence,
    };
    let problems = verification_problems(&result);
    if problems.is_empty() {
        Ok(result)
    } else {
        Err(Error::Verification(problems.join("; ")))
    }
}

/// Everything wrong with a split; empty when it is fully verified.
pub fn verification_problems(r: &SplitResult) -> Vec<String> {
    let mut out = Vec::new();
    let k = r.tau.degree();
    if r.sigma == r.gamma {
        out.push(format!("sigma and gamma coincide: {}", r.sigma));
    }
    for (name, f) in [("sigma", &r.sigma), ("gamma", &r.gamma)] {
        match reduce_degree(f, k) {
            Ok(g) if g == r.tau => {}
            Ok(g) => out.push(format!("{name} reduces to {g}, not tau")),
            Err(e) => out.push(format!("{name}: {e}")),
        }
    }
    for (name, c) in [("sigma", &r.sigma_certificate), ("gamma", &r.gamma_certificate)] {
        if let Some((cond, v)) = c.conditions.first_failure() {
            out.push(format!("{name} structure fails {cond}: {} at {:?}", v.clause, v.nodes));
        }
        if !c.unmodeled.is_empty() {
            out.push(format!("{name} structure leaves labels unrealized at nodes {:?}", c.unmodeled));
        }
        if c.witness_satisfiable == Some(false) {
            out.push(format!("{name} is rejected by its own witness"));
        }
    }
    if let Some(q) = r.divergence.iter().position(|d| !d) {
        out.push(format!("point forms agree at chain position {q}"));
    }
    out
}

/// Aggregate outcome of splitting many forms.
#[derive(Clone, Debug)]
pub struct NonatomicityReport {
    pub params: Params,
    pub entries: Vec<ReportEntry>,
}

#[derive(Clone, Debug)]
pub struct ReportEntry {
    pub tau: NormalForm,
    pub outcome: std::result::Result<(NormalForm, NormalForm), String>,
}

impl NonatomicityReport {
    pub fn attempted(&self) -> usize {
        self.entries.len()
    }

    pub fn verified(&self) -> usize {
        self.entries.iter().filter(|e| e.outcome.is_ok()).count()
    }

    pub fn all_verified(&self) -> bool {
        self.verified() == self.attempted()
    }
}

/// All satisfiable diagonal-free forms of degree 0.
pub fn satisfiable_below_t_degree0(p: &Params) -> Result<Vec<NormalForm>> {
    let n = p.n;
    let mut base = Color(0);
    for i in 0..n {
        base.insert(Generator::Diag(i, i), n);
    }
    let mut out = Vec::new();
    for vars in 0u64..1 << p.m {
        let mut c = base;
        for l in (0..p.m).filter(|l| vars >> l & 1 == 1) {
            c.insert(Generator::Var(l), n);
        }
        let f = NormalForm::atom(n, c);
        if is_satisfiable(&f, p)?.satisfiable {
            out.push(f);
        }
    }
    Ok(out)
}

/// Distinct satisfiable diagonal-free forms of the given degree, read off
/// diagonal-free nodes of random structures in the class.
pub fn sample_below_t(p: &Params, degree: usize, count: usize, seed: u64) -> Result<Vec<NormalForm>> {
    let mut rng = rng_from_seed(seed);
    let mut out: Vec<NormalForm> = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < count * 200 {
        attempts += 1;
        let size = rng.random_range(1..=4);
        let s = if rng.random_bool(0.5) {
            random_valid_structure(p, 4, 0.25, 20, &mut rng)
        } else {
            None
        }
        .unwrap_or_else(|| random_structure(p.n, size, 0.0, &mut rng));
        let e = random_valuation(p.m, s.len(), &mut rng);
        let v = rng.random_range(0..s.len());
        let f = point_form(&s, &e, v, degree);
        if below_t(&f) && !out.contains(&f) && is_satisfiable(&f, p)?.satisfiable {
            out.push(f);
        }
    }
    Ok(out)
}

fn split_entry(tau: NormalForm, p: &Params) -> ReportEntry {
    let outcome = split_atom(&tau, p).map(|r| (r.sigma, r.gamma)).map_err(|e| e.to_string());
    ReportEntry { tau, outcome }
}

/// Splits every satisfiable degree-0 form below `t` and `sample_size`
/// sampled forms of each degree `1..=degree_bound`.
pub fn nonatomicity_report(p: &Params, degree_bound: usize, sample_size: usize, seed: u64) -> Result<NonatomicityReport> {
    let mut entries: Vec<ReportEntry> =
        satisfiable_below_t_degree0(p)?.into_iter().map(|tau| split_entry(tau, p)).collect();
    for degree in 1..=degree_bound {
        for tau in sample_below_t(p, degree, sample_size, seed.wrapping_add(degree as u64))? {
            entries.push(split_entry(tau, p));
        }
    }
    Ok(NonatomicityReport { params: *p, entries })
}
