use thiserror::Error;

use crate::forms::FormCount;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    Params(String),

    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("index out of bounds at offset {pos}: {msg}")]
    IndexOutOfBounds { pos: usize, msg: String },

    #[error("budget exceeded: {what} requires |F_{degree}| = {count} forms, budget is {budget}")]
    FormBudget {
        what: &'static str,
        degree: usize,
        count: FormCount,
        budget: u64,
    },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("invalid normal form: {0}")]
    InvalidForm(String),

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("size bound exceeded: {0}")]
    SizeBound(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::FormBudget { .. } | Error::Budget(_))
    }
}
