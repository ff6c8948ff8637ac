//! Rewriting terms into sums of normal forms and deciding equations.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::forms::{enumerate_degree0, FormCount, NormalForm};
use crate::params::Params;
use crate::term::Term;
use crate::witness::is_satisfiable;

/// Maximum number of enumerated forms unless overridden.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// A set of distinct normal forms of one degree, read as their sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormSet {
    degree: usize,
    members: BTreeSet<NormalForm>,
}

impl FormSet {
    pub fn empty(degree: usize) -> Self {
        FormSet { degree, members: BTreeSet::new() }
    }

    /// Rejects members of differing degree instead of coercing them.
    pub fn new(degree: usize, members: impl IntoIterator<Item = NormalForm>) -> Result<Self> {
        let members: BTreeSet<NormalForm> = members.into_iter().collect();
        if let Some(bad) = members.iter().find(|f| f.degree() != degree) {
            return Err(Error::DegreeMismatch(degree, bad.degree()));
        }
        Ok(FormSet { degree, members })
    }

    /// Builds a set whose degree is taken from its members.
    pub fn from_forms(members: Vec<NormalForm>) -> Result<Self> {
        let degree = members.first().map_or(0, NormalForm::degree);
        FormSet::new(degree, members)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &NormalForm> {
        self.members.iter()
    }

    pub fn contains(&self, f: &NormalForm) -> bool {
        self.members.contains(f)
    }
}

/// Whether every algebra with operators satisfies `f <= t`.
///
/// A degree-`q` form fixes the sign of every generator and of every `c_i g`
/// with `g` of degree `q - 1`, so `c_i s` holds below `f` exactly when some
/// positively listed `g in subs[i]` lies below `s`.
pub fn eval_on_form(t: &Term, f: &NormalForm) -> Result<bool> {
    if t.depth() > f.degree() {
        return Err(Error::Precondition(format!(
            "term depth {} exceeds form degree {}",
            t.depth(),
            f.degree()
        )));
    }
    Ok(eval_unchecked(t, f))
}

fn eval_unchecked(t: &Term, f: &NormalForm) -> bool {
    let n = f.dims();
    match t {
        Term::Zero => false,
        Term::One => true,
        Term::Diag(i, j) => f.color().has_diag(*i, *j, n),
        Term::Var(l) => f.color().has_var(*l, n),
        Term::Neg(a) => !eval_unchecked(a, f),
        Term::Cyl(i, a) => f.subs(*i).iter().any(|g| eval_unchecked(a, g)),
        Term::And(a, b) => eval_unchecked(a, f) && eval_unchecked(b, f),
        Term::Or(a, b) => eval_unchecked(a, f) || eval_unchecked(b, f),
    }
}

/// Every form of degree `q`, if `|F_q|` fits the budget.
pub fn enumerate_forms(p: &Params, degree: usize, budget: u64) -> Result<Vec<NormalForm>> {
    let count = FormCount::new(p, degree);
    if count.exceeds(budget) {
        return Err(Error::FormBudget { what: "enumeration", degree, count, budget });
    }
    let atoms = enumerate_degree0(p, budget)?;
    if degree == 0 {
        return Ok(atoms);
    }
    let lower = enumerate_forms(p, degree - 1, budget)?;
    let subsets: Vec<Vec<NormalForm>> = (0u64..1 << lower.len())
        .map(|mask| lower.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, g)| g.clone()).collect())
        .collect();
    let mut out = Vec::new();
    for atom in &atoms {
        let mut choice = vec![0usize; p.n];
        loop {
            let subs = choice.iter().map(|&c| subsets[c].clone()).collect();
            out.push(NormalForm::new(degree, atom.color(), subs));
            let mut d = 0;
            while d < p.n {
                choice[d] += 1;
                if choice[d] < subsets.len() {
                    break;
                }
                choice[d] = 0;
                d += 1;
            }
            if d == p.n {
                break;
            }
        }
    }
    Ok(out)
}

/// The forms of degree `depth(t)` lying below `t`.
pub fn rewrite(t: &Term, p: &Params, budget: u64) -> Result<FormSet> {
    t.check(p)?;
    let q = t.depth();
    let count = FormCount::new(p, q);
    if count.exceeds(budget) {
        return Err(Error::FormBudget { what: "rewriting", degree: q, count, budget });
    }
    let members = enumerate_forms(p, q, budget)?.into_iter().filter(|f| eval_unchecked(t, f));
    FormSet::new(q, members)
}

/// The first satisfiable member, or `None` when the whole sum is zero.
pub fn first_satisfiable(forms: &FormSet, p: &Params) -> Result<Option<NormalForm>> {
    for f in forms.iter() {
        if is_satisfiable(f, p)?.satisfiable {
            return Ok(Some(f.clone()));
        }
    }
    Ok(None)
}

/// Whether the class satisfies `sum(forms) = 0`.
pub fn decide_zero_forms(forms: &FormSet, p: &Params) -> Result<bool> {
    Ok(first_satisfiable(forms, p)?.is_none())
}

/// Whether the class satisfies `t = 0`.
pub fn decide_zero(t: &Term, p: &Params, budget: u64) -> Result<bool> {
    decide_zero_forms(&rewrite(t, p, budget)?, p)
}

/// `t1 = t2` holds iff their symmetric difference is zero.
pub fn symmetric_difference(t1: &Term, t2: &Term) -> Term {
    Term::or(
        Term::and(t1.clone(), Term::neg(t2.clone())),
        Term::and(Term::neg(t1.clone()), t2.clone()),
    )
}

pub fn decide_equation(t1: &Term, t2: &Term, p: &Params, budget: u64) -> Result<bool> {
    decide_zero(&symmetric_difference(t1, t2), p, budget)
}
