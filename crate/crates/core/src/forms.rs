//! Disjunctive normal forms of bounded cylindrification degree.
//!
//! A degree-0 form fixes the sign of every generator `d_ij` and `x_l`. A
//! degree-(k+1) form additionally fixes, for every direction `i` and every
//! degree-k form `s`, the sign of `c_i s`. Only the positive part is stored:
//! the color (positive generators) and, per direction, the set of degree-k
//! forms occurring positively under `c_i`. Everything else is negative.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::params::Params;
use crate::term::Term;

/// One element of `D_{n,m}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Diag(usize, usize),
    Var(usize),
}

impl Generator {
    /// Bit position: `d_ij` at `i*n + j`, `x_l` at `n*n + l`.
    pub fn index(self, n: usize) -> usize {
        match self {
            Generator::Diag(i, j) => i * n + j,
            Generator::Var(l) => n * n + l,
        }
    }

    pub fn from_index(idx: usize, n: usize) -> Generator {
        if idx < n * n {
            Generator::Diag(idx / n, idx % n)
        } else {
            Generator::Var(idx - n * n)
        }
    }

    pub fn all(p: &Params) -> impl Iterator<Item = Generator> {
        let n = p.n;
        (0..p.generator_count()).map(move |b| Generator::from_index(b, n))
    }

    pub fn name(self) -> String {
        match self {
            Generator::Diag(i, j) => format!("d_{i}_{j}"),
            Generator::Var(l) => format!("x_{l}"),
        }
    }

    pub fn parse_name(name: &str, p: &Params) -> Result<Generator> {
        let bad = || Error::InvalidForm(format!("unknown generator `{name}`"));
        let parts: Vec<&str> = name.split('_').collect();
        let idx = |s: &str| s.parse::<usize>().map_err(|_| bad());
        let g = match parts.as_slice() {
            ["d", i, j] => Generator::Diag(idx(i)?, idx(j)?),
            ["x", l] => Generator::Var(idx(l)?),
            _ => return Err(bad()),
        };
        match g {
            Generator::Diag(i, j) if i >= p.n || j >= p.n => {
                Err(Error::InvalidForm(format!("generator `{name}` out of range for n = {}", p.n)))
            }
            Generator::Var(l) if l >= p.m => {
                Err(Error::InvalidForm(format!("generator `{name}` out of range for m = {}", p.m)))
            }
            g => Ok(g),
        }
    }

    pub fn to_term(self) -> Term {
        match self {
            Generator::Diag(i, j) => Term::Diag(i, j),
            Generator::Var(l) => Term::Var(l),
        }
    }
}

/// Set of positively signed generators, as a bit mask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Color(pub u64);

impl Color {
    pub fn from_generators<I: IntoIterator<Item = Generator>>(gens: I, n: usize) -> Color {
        let mut c = Color(0);
        for g in gens {
            c.insert(g, n);
        }
        c
    }

    pub fn contains(self, g: Generator, n: usize) -> bool {
        self.0 >> g.index(n) & 1 == 1
    }

    pub fn insert(&mut self, g: Generator, n: usize) {
        self.0 |= 1 << g.index(n);
    }

    pub fn remove(&mut self, g: Generator, n: usize) {
        self.0 &= !(1 << g.index(n));
    }

    pub fn has_diag(self, i: usize, j: usize, n: usize) -> bool {
        self.contains(Generator::Diag(i, j), n)
    }

    pub fn has_var(self, l: usize, n: usize) -> bool {
        self.contains(Generator::Var(l), n)
    }

    pub fn generators(self, n: usize) -> impl Iterator<Item = Generator> {
        (0..64).filter(move |b| self.0 >> b & 1 == 1).map(move |b| Generator::from_index(b, n))
    }

    /// No positive `d_ij` with `i != j`.
    pub fn is_diagonal_free(self, n: usize) -> bool {
        (0..n).all(|i| (0..n).all(|j| i == j || !self.has_diag(i, j, n)))
    }
}

struct FormData {
    degree: usize,
    color: Color,
    subs: Vec<Vec<NormalForm>>,
    hash: u64,
}

/// A normal form in compact positive representation. Cloning is cheap;
/// equality short-circuits on shared pointers and on the cached hash.
#[derive(Clone)]
pub struct NormalForm(Arc<FormData>);

impl NormalForm {
    /// Builds a form; each direction's set is sorted and deduplicated. No
    /// validation happens here (see [`validate_form`]).
    pub fn new(degree: usize, color: Color, mut subs: Vec<Vec<NormalForm>>) -> NormalForm {
        for s in &mut subs {
            s.sort();
            s.dedup();
        }
        let mut h = DefaultHasher::new();
        degree.hash(&mut h);
        color.hash(&mut h);
        for s in &subs {
            s.len().hash(&mut h);
            for g in s {
                g.0.hash.hash(&mut h);
            }
        }
        NormalForm(Arc::new(FormData { degree, color, subs, hash: h.finish() }))
    }

    /// Degree-0 form in dimension `n`.
    pub fn atom(n: usize, color: Color) -> NormalForm {
        NormalForm::new(0, color, vec![Vec::new(); n])
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn color(&self) -> Color {
        self.0.color
    }

    /// Number of directions (the dimension this form was built for).
    pub fn dims(&self) -> usize {
        self.0.subs.len()
    }

    /// Forms occurring positively under `c_i`.
    pub fn subs(&self, i: usize) -> &[NormalForm] {
        &self.0.subs[i]
    }

    pub fn all_subs(&self) -> &[Vec<NormalForm>] {
        &self.0.subs
    }

    pub fn ptr_eq(&self, other: &NormalForm) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Copy of this form with direction `i` replaced.
    pub fn with_subs(&self, i: usize, set: Vec<NormalForm>) -> NormalForm {
        let mut subs = self.0.subs.clone();
        subs[i] = set;
        NormalForm::new(self.degree(), self.color(), subs)
    }

    /// Number of form occurrences in the compact syntax tree (this one included).
    pub fn occurrences(&self) -> usize {
        1 + self.0.subs.iter().flatten().map(NormalForm::occurrences).sum::<usize>()
    }

    fn fmt_color(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dims();
        let names: Vec<String> = self.color().generators(n).map(Generator::name).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

impl PartialEq for NormalForm {
    fn eq(&self, other: &Self) -> bool {
        self.ptr_eq(other)
            || (self.0.hash == other.0.hash
                && self.0.degree == other.0.degree
                && self.0.color == other.0.color
                && self.0.subs == other.0.subs)
    }
}

impl Eq for NormalForm {}

impl Hash for NormalForm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl Ord for NormalForm {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.ptr_eq(other) {
            return Ordering::Equal;
        }
        self.0
            .degree
            .cmp(&other.0.degree)
            .then(self.0.color.cmp(&other.0.color))
            .then_with(|| self.0.subs.cmp(&other.0.subs))
    }
}

impl PartialOrd for NormalForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return self.fmt_color(f);
        }
        f.write_str("<")?;
        self.fmt_color(f)?;
        for (i, s) in self.all_subs().iter().enumerate() {
            write!(f, " | c{i}: [")?;
            for (idx, g) in s.iter().enumerate() {
                if idx > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{g}")?;
            }
            f.write_str("]")?;
        }
        f.write_str(">")
    }
}

impl fmt::Debug for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}{}", self.degree(), self)
    }
}

/// Hash-consing table so that equal forms share one allocation.
#[derive(Default)]
pub struct FormInterner {
    table: HashSet<NormalForm>,
}

impl FormInterner {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, form: NormalForm) -> NormalForm {
        if let Some(existing) = self.table.get(&form) {
            return existing.clone();
        }
        self.table.insert(form.clone());
        form
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

/// `|F_q|` for given parameters, kept symbolic because it is non-elementary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FormCount {
    pub generators: usize,
    pub n: usize,
    pub degree: usize,
}

impl FormCount {
    pub fn new(p: &Params, degree: usize) -> Self {
        FormCount { generators: p.generator_count(), n: p.n, degree }
    }

    /// Binary logarithm of the count when it fits in a `u128`.
    pub fn log2(&self) -> Option<u128> {
        let g = self.generators as u128;
        if self.degree == 0 {
            return Some(g);
        }
        let lower = FormCount { degree: self.degree - 1, ..*self }.exact()?;
        lower.checked_mul(self.n as u128)?.checked_add(g)
    }

    pub fn exact(&self) -> Option<u128> {
        let e = self.log2()?;
        if e < 128 {
            Some(1u128 << e)
        } else {
            None
        }
    }

    pub fn exceeds(&self, budget: u64) -> bool {
        self.exact().is_none_or(|c| c > budget as u128)
    }

    fn fmt_lower_exponent(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lower = FormCount { degree: self.degree - 1, ..*self };
        if lower.degree == 0 {
            write!(f, "{}", (self.n as u128) << lower.generators)
        } else {
            write!(f, "({}·{lower})", self.n)
        }
    }
}

impl fmt::Display for FormCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^{}", self.generators)?;
        if self.degree > 0 {
            f.write_str("·2^")?;
            self.fmt_lower_exponent(f)?;
        }
        Ok(())
    }
}

/// All `2^(n^2+m)` degree-0 forms, ordered by color mask.
pub fn enumerate_degree0(p: &Params, budget: u64) -> Result<Vec<NormalForm>> {
    let count = FormCount::new(p, 0);
    if count.exceeds(budget) {
        return Err(Error::FormBudget { what: "degree-0 enumeration", degree: 0, count, budget });
    }
    let total = 1u64 << p.generator_count();
    Ok((0..total).map(|mask| NormalForm::atom(p.n, Color(mask))).collect())
}

/// Distinct forms of equal degree are disjoint in every Boolean algebra
/// with operators; equal ones are not.
pub fn disjoint(f: &NormalForm, g: &NormalForm) -> Result<bool> {
    if f.degree() != g.degree() {
        return Err(Error::DegreeMismatch(f.degree(), g.degree()));
    }
    Ok(f != g)
}

/// The unique degree-`h` form above `f`.
pub fn reduce_degree(f: &NormalForm, h: usize) -> Result<NormalForm> {
    if h > f.degree() {
        return Err(Error::Precondition(format!(
            "cannot reduce a degree-{} form to degree {h}",
            f.degree()
        )));
    }
    Ok(reduce_unchecked(f, h))
}

fn reduce_unchecked(f: &NormalForm, h: usize) -> NormalForm {
    if h == f.degree() {
        return f.clone();
    }
    if h == 0 {
        return NormalForm::atom(f.dims(), f.color());
    }
    let subs = f
        .all_subs()
        .iter()
        .map(|s| s.iter().map(|g| reduce_unchecked(g, h - 1)).collect())
        .collect();
    NormalForm::new(h, f.color(), subs)
}

/// Problems found by [`validate_form`]; empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormDiagnostics(pub Vec<String>);

impl FormDiagnostics {
    pub fn is_valid(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn validate_form(f: &NormalForm, p: &Params) -> FormDiagnostics {
    let mut out = Vec::new();
    validate_into(f, p, "root", &mut out);
    FormDiagnostics(out)
}

fn validate_into(f: &NormalForm, p: &Params, path: &str, out: &mut Vec<String>) {
    if f.dims() != p.n {
        out.push(format!("{path}: {} directions, expected {}", f.dims(), p.n));
        return;
    }
    let bad = f.color().0 & !mask_below(p.generator_count());
    if bad != 0 {
        let names: Vec<String> = Color(bad).generators(p.n).map(Generator::name).collect();
        out.push(format!("{path}: color contains out-of-range generators {}", names.join(",")));
    }
    for (i, s) in f.all_subs().iter().enumerate() {
        if f.degree() == 0 && !s.is_empty() {
            out.push(format!("{path}: degree-0 form has cylindrified members in direction {i}"));
            continue;
        }
        for (idx, g) in s.iter().enumerate() {
            let child = format!("{path}.c{i}[{idx}]");
            if g.degree() + 1 != f.degree() {
                out.push(format!("{child}: degree {} inside a degree-{} form", g.degree(), f.degree()));
            } else {
                validate_into(g, p, &child, out);
            }
        }
    }
}

fn mask_below(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// The literal conjunction a form stands for, negative conjuncts included.
pub fn form_to_term(f: &NormalForm, p: &Params, budget: u64) -> Result<Term> {
    let gens = Generator::all(p).map(|g| {
        if f.color().contains(g, p.n) {
            g.to_term()
        } else {
            Term::neg(g.to_term())
        }
    });
    if f.degree() == 0 {
        return Ok(Term::and_all(gens));
    }
    let lower = FormCount::new(p, f.degree() - 1);
    if f.degree() > 1 || lower.exceeds(budget) {
        return Err(Error::FormBudget { what: "form_to_term", degree: f.degree() - 1, count: lower, budget });
    }
    let all = enumerate_degree0(p, budget)?;
    let mut literals: Vec<Term> = gens.collect();
    for i in 0..p.n {
        for s in &all {
            let c = Term::cyl(i, form_to_term(s, p, budget)?);
            literals.push(if f.subs(i).contains(s) { c } else { Term::neg(c) });
        }
    }
    Ok(Term::and_all(literals))
}
