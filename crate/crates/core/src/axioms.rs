//! Ground instances of the axiom schemata over a fixed dimension.
//!
//! Schemata quantified over elements use the equation variables
//! `x = Var(0)`, `y = Var(1)`, `z = Var(2)`.

use std::fmt;

use crate::params::{Params, Variant};
use crate::term::{Equation, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomFamily {
    C0,
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    WC6,
    C7,
}

impl AxiomFamily {
    pub fn for_variant(variant: Variant) -> &'static [AxiomFamily] {
        use AxiomFamily::*;
        match variant {
            Variant::Nca => &[C0, C1, C2, C3, C5, C6, C7],
            Variant::Wca => &[C0, C1, C2, C3, C5, WC6, C7],
        }
    }
}

impl fmt::Display for AxiomFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomInstance {
    pub family: AxiomFamily,
    pub equation: Equation,
}

impl fmt::Display for AxiomInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.family, self.equation)
    }
}

fn x() -> Term {
    Term::var(0)
}

fn y() -> Term {
    Term::var(1)
}

fn z() -> Term {
    Term::var(2)
}

/// Triples `(i, j, k)` with `i != j` and `k` outside `{i, j}`.
fn off_diagonal_triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |i| {
        (0..n).flat_map(move |j| (0..n).filter(move |&k| i != j && k != i && k != j).map(move |k| (i, j, k)))
    })
}

/// All ground instances of one family in dimension `n`.
pub fn family_instances(family: AxiomFamily, n: usize) -> Vec<Equation> {
    use AxiomFamily::*;
    let dims = 0..n;
    match family {
        C0 => vec![
            Equation::new(Term::or(x(), y()), Term::or(y(), x())),
            Equation::new(Term::and(x(), y()), Term::and(y(), x())),
            Equation::new(Term::or(x(), Term::or(y(), z())), Term::or(Term::or(x(), y()), z())),
            Equation::new(Term::and(x(), Term::and(y(), z())), Term::and(Term::and(x(), y()), z())),
            Equation::new(Term::or(x(), Term::and(x(), y())), x()),
            Equation::new(Term::and(x(), Term::or(x(), y())), x()),
            Equation::new(
                Term::and(x(), Term::or(y(), z())),
                Term::or(Term::and(x(), y()), Term::and(x(), z())),
            ),
            Equation::new(
                Term::or(x(), Term::and(y(), z())),
                Term::and(Term::or(x(), y()), Term::or(x(), z())),
            ),
            Equation::new(Term::or(x(), Term::neg(x())), Term::One),
            Equation::new(Term::and(x(), Term::neg(x())), Term::Zero),
        ],
        C1 => dims.map(|i| Equation::new(Term::cyl(i, Term::Zero), Term::Zero)).collect(),
        C2 => dims.map(|i| Equation::leq(x(), Term::cyl(i, x()))).collect(),
        C3 => dims
            .map(|i| {
                Equation::new(
                    Term::cyl(i, Term::and(x(), Term::cyl(i, y()))),
                    Term::and(Term::cyl(i, x()), Term::cyl(i, y())),
                )
            })
            .collect(),
        C4 => dims
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| Equation::new(Term::cyl(i, Term::cyl(j, x())), Term::cyl(j, Term::cyl(i, x()))))
            .collect(),
        C5 => dims.map(|i| Equation::new(Term::diag(i, i), Term::One)).collect(),
        C6 => off_diagonal_triples(n)
            .map(|(i, j, k)| {
                Equation::new(Term::diag(i, j), Term::cyl(k, Term::and(Term::diag(i, k), Term::diag(k, j))))
            })
            .collect(),
        WC6 => off_diagonal_triples(n)
            .flat_map(|(i, j, k)| {
                [
                    Equation::leq(Term::and(Term::diag(i, k), Term::diag(k, j)), Term::diag(i, j)),
                    Equation::new(Term::diag(i, j), Term::diag(j, i)),
                    Equation::new(Term::diag(i, j), Term::cyl(k, Term::diag(j, i))),
                ]
            })
            .collect(),
        C7 => dims
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| {
                Equation::new(
                    Term::and(
                        Term::cyl(i, Term::and(Term::diag(i, j), x())),
                        Term::cyl(i, Term::and(Term::diag(i, j), Term::neg(x()))),
                    ),
                    Term::Zero,
                )
            })
            .collect(),
    }
}

/// Every ground instance of the axioms defining the variant's class.
pub fn instantiate_axioms(p: &Params) -> Vec<AxiomInstance> {
    AxiomFamily::for_variant(p.variant)
        .iter()
        .flat_map(|&family| {
            family_instances(family, p.n).into_iter().map(move |equation| AxiomInstance { family, equation })
        })
        .collect()
}
