//! Terms of the cylindric signature: constants `0`, `1`, diagonals `d i j`,
//! free variables `x l`, complement, cylindrifications `c i`, meet and join.
//!
//! Concrete syntax (whitespace between tokens is optional):
//!
//! ```text
//! term := '0' | '1' | 'd' INT INT | 'x' INT | '-' term
//!       | 'c' INT '(' term ')' | term '*' term | term '+' term | '(' term ')'
//! ```
//!
//! `-` binds tighter than `*`, which binds tighter than `+`; both binary
//! operators associate to the left.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::params::Params;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Zero,
    One,
    Diag(usize, usize),
    Var(usize),
    Neg(Arc<Term>),
    Cyl(usize, Arc<Term>),
    And(Arc<Term>, Arc<Term>),
    Or(Arc<Term>, Arc<Term>),
}

impl Term {
    pub fn diag(i: usize, j: usize) -> Term {
        Term::Diag(i, j)
    }

    pub fn var(l: usize) -> Term {
        Term::Var(l)
    }

    pub fn neg(t: Term) -> Term {
        Term::Neg(Arc::new(t))
    }

    pub fn cyl(i: usize, t: Term) -> Term {
        Term::Cyl(i, Arc::new(t))
    }

    pub fn and(a: Term, b: Term) -> Term {
        Term::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Term, b: Term) -> Term {
        Term::Or(Arc::new(a), Arc::new(b))
    }

    /// Left-nested meet of all terms; `1` when empty.
    pub fn and_all<I: IntoIterator<Item = Term>>(terms: I) -> Term {
        terms.into_iter().reduce(Term::and).unwrap_or(Term::One)
    }

    /// Left-nested join of all terms; `0` when empty.
    pub fn or_all<I: IntoIterator<Item = Term>>(terms: I) -> Term {
        terms.into_iter().reduce(Term::or).unwrap_or(Term::Zero)
    }

    /// Nesting depth of cylindrifications.
    pub fn depth(&self) -> usize {
        match self {
            Term::Zero | Term::One | Term::Diag(..) | Term::Var(_) => 0,
            Term::Neg(a) => a.depth(),
            Term::Cyl(_, a) => a.depth() + 1,
            Term::And(a, b) | Term::Or(a, b) => a.depth().max(b.depth()),
        }
    }

    /// Largest variable index plus one (0 for ground terms).
    pub fn variable_count(&self) -> usize {
        match self {
            Term::Zero | Term::One | Term::Diag(..) => 0,
            Term::Var(l) => l + 1,
            Term::Neg(a) | Term::Cyl(_, a) => a.variable_count(),
            Term::And(a, b) | Term::Or(a, b) => a.variable_count().max(b.variable_count()),
        }
    }

    /// Checks every index against the dimension and the number of variables.
    pub fn check(&self, p: &Params) -> Result<()> {
        let oob = |msg: String| Err(Error::IndexOutOfBounds { pos: 0, msg });
        match self {
            Term::Zero | Term::One => Ok(()),
            Term::Diag(i, j) if *i >= p.n || *j >= p.n => {
                oob(format!("d {i} {j} with n = {}", p.n))
            }
            Term::Diag(..) => Ok(()),
            Term::Var(l) if *l >= p.m => oob(format!("x {l} with m = {}", p.m)),
            Term::Var(_) => Ok(()),
            Term::Cyl(i, _) if *i >= p.n => oob(format!("c {i} with n = {}", p.n)),
            Term::Neg(a) | Term::Cyl(_, a) => a.check(p),
            Term::And(a, b) | Term::Or(a, b) => {
                a.check(p)?;
                b.check(p)
            }
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        match self {
            Term::Zero => f.write_str("0"),
            Term::One => f.write_str("1"),
            Term::Diag(i, j) => write!(f, "d {i} {j}"),
            Term::Var(l) => write!(f, "x {l}"),
            Term::Neg(a) => {
                f.write_str("- ")?;
                a.fmt_prec(f, 2)
            }
            Term::Cyl(i, a) => {
                write!(f, "c {i} ( ")?;
                a.fmt_prec(f, 0)?;
                f.write_str(" )")
            }
            Term::And(a, b) => {
                if prec > 1 {
                    f.write_str("( ")?;
                }
                a.fmt_prec(f, 1)?;
                f.write_str(" * ")?;
                b.fmt_prec(f, 2)?;
                if prec > 1 {
                    f.write_str(" )")?;
                }
                Ok(())
            }
            Term::Or(a, b) => {
                if prec > 0 {
                    f.write_str("( ")?;
                }
                a.fmt_prec(f, 0)?;
                f.write_str(" + ")?;
                b.fmt_prec(f, 1)?;
                if prec > 0 {
                    f.write_str(" )")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// `lhs = rhs`. Variables in axiom schemata are equation variables,
/// quantified over the whole algebra when checked.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Equation { lhs, rhs }
    }

    /// `a <= b`, written as `a * b = a`.
    pub fn leq(a: Term, b: Term) -> Self {
        Equation::new(Term::and(a.clone(), b), a)
    }

    pub fn variable_count(&self) -> usize {
        self.lhs.variable_count().max(self.rhs.variable_count())
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok {
    Int(usize),
    D,
    X,
    C,
    Minus,
    Star,
    Plus,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(v) => write!(f, "{v}"),
            Tok::D => f.write_str("d"),
            Tok::X => f.write_str("x"),
            Tok::C => f.write_str("c"),
            Tok::Minus => f.write_str("-"),
            Tok::Star => f.write_str("*"),
            Tok::Plus => f.write_str("+"),
            Tok::LParen => f.write_str("("),
            Tok::RParen => f.write_str(")"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let b = bytes[pos];
        let start = pos;
        let tok = match b {
            b if b.is_ascii_whitespace() => {
                pos += 1;
                continue;
            }
            b'0'..=b'9' => {
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                let v = text[start..pos].parse().map_err(|_| Error::Syntax {
                    pos: start,
                    msg: format!("integer `{}` is too large", &text[start..pos]),
                })?;
                toks.push((start, Tok::Int(v)));
                continue;
            }
            b'd' => Tok::D,
            b'x' => Tok::X,
            b'c' => Tok::C,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'+' => Tok::Plus,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(Error::Syntax { pos: start, msg: format!("unexpected character `{ch}`") });
            }
        };
        toks.push((start, tok));
        pos += 1;
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    end: usize,
    p: &'a Params,
}

impl Parser<'_> {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.idx).map(|&(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map_or(self.end, |&(p, _)| p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.peek();
        self.idx += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        let pos = self.pos();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(Error::Syntax { pos, msg: format!("expected `{want}`, found `{t}`") }),
            None => Err(Error::Syntax { pos, msg: format!("expected `{want}`, found end of input") }),
        }
    }

    fn index(&mut self, bound: usize, what: &str) -> Result<usize> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(v)) if v < bound => Ok(v),
            Some(Tok::Int(v)) => Err(Error::IndexOutOfBounds {
                pos,
                msg: format!("{what} index {v} must be below {bound}"),
            }),
            Some(t) => Err(Error::Syntax { pos, msg: format!("expected an index, found `{t}`") }),
            None => Err(Error::Syntax { pos, msg: "expected an index, found end of input".into() }),
        }
    }

    fn join(&mut self) -> Result<Term> {
        let mut lhs = self.meet()?;
        while self.peek() == Some(Tok::Plus) {
            self.bump();
            lhs = Term::or(lhs, self.meet()?);
        }
        Ok(lhs)
    }

    fn meet(&mut self) -> Result<Term> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(Tok::Star) {
            self.bump();
            lhs = Term::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Term> {
        if self.peek() == Some(Tok::Minus) {
            self.bump();
            return Ok(Term::neg(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Term> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(0)) => Ok(Term::Zero),
            Some(Tok::Int(1)) => Ok(Term::One),
            Some(Tok::Int(v)) => {
                Err(Error::Syntax { pos, msg: format!("`{v}` is not a constant (expected 0 or 1)") })
            }
            Some(Tok::D) => {
                let i = self.index(self.p.n, "diagonal")?;
                let j = self.index(self.p.n, "diagonal")?;
                Ok(Term::Diag(i, j))
            }
            Some(Tok::X) => Ok(Term::Var(self.index(self.p.m, "variable")?)),
            Some(Tok::C) => {
                let i = self.index(self.p.n, "cylindrification")?;
                self.expect(Tok::LParen)?;
                let body = self.join()?;
                self.expect(Tok::RParen)?;
                Ok(Term::cyl(i, body))
            }
            Some(Tok::LParen) => {
                let body = self.join()?;
                self.expect(Tok::RParen)?;
                Ok(body)
            }
            Some(t) => Err(Error::Syntax { pos, msg: format!("unexpected `{t}`") }),
            None => Err(Error::Syntax { pos, msg: "unexpected end of input".into() }),
        }
    }
}

pub fn parse_term(text: &str, p: &Params) -> Result<Term> {
    let toks = lex(text)?;
    let mut parser = Parser { toks, idx: 0, end: text.len(), p };
    let term = parser.join()?;
    if let Some(t) = parser.peek() {
        return Err(Error::Syntax { pos: parser.pos(), msg: format!("trailing input starting at `{t}`") });
    }
    Ok(term)
}
