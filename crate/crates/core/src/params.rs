use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which class of algebras the decision procedures target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Non-commutative cylindric algebras: C0-C3, C5, C6, C7.
    Nca,
    /// Weakened cylindric algebras: C0-C3, C5, WC6, C7.
    Wca,
}

impl Variant {
    pub const ALL: [Variant; 2] = [Variant::Nca, Variant::Wca];
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Nca => f.write_str("nca"),
            Variant::Wca => f.write_str("wca"),
        }
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nca" => Ok(Variant::Nca),
            "wca" => Ok(Variant::Wca),
            other => Err(Error::Params(format!("unknown variant `{other}` (expected nca or wca)"))),
        }
    }
}

/// Dimension, number of free variables and target class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    pub m: usize,
    pub variant: Variant,
}

/// Colors are stored as 64-bit masks over the generators.
pub const MAX_GENERATORS: usize = 64;

impl Params {
    pub fn new(n: usize, m: usize, variant: Variant) -> Result<Self> {
        let p = Params { n, m, variant };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Params(format!("dimension n = {} must be at least 2", self.n)));
        }
        if self.generator_count() > MAX_GENERATORS {
            return Err(Error::Params(format!(
                "n^2 + m = {} exceeds the supported maximum of {MAX_GENERATORS} generators",
                self.generator_count()
            )));
        }
        Ok(())
    }

    /// |D_{n,m}| = n^2 + m.
    pub fn generator_count(&self) -> usize {
        self.n * self.n + self.m
    }

    pub fn with_variant(self, variant: Variant) -> Self {
        Params { variant, ..self }
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} m={} {}", self.n, self.m, self.variant)
    }
}
