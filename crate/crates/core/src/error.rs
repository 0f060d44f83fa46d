use crate::grid::Violation;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("ceiling q={0} out of range (must be between 1 and 255)")]
    InvalidCeiling(i64),

    #[error("invalid tableau: {}{}", .0.first().map(|v| v.to_string()).unwrap_or_default(),
            if .0.len() > 1 { format!(" (+{} more)", .0.len() - 1) } else { String::new() })]
    InvalidTableau(Vec<Violation>),

    #[error("invalid plane partition: {0}")]
    InvalidPlanePartition(String),

    #[error("invalid poset: {0}")]
    InvalidPoset(String),

    #[error("not an order ideal: element {element} present but its lower cover {missing} is not")]
    NotAnIdeal { element: usize, missing: usize },

    #[error("malformed ribbon component ({reason}): cells {cells:?}")]
    MalformedRibbon {
        cells: Vec<(usize, usize)>,
        reason: String,
    },

    #[error("state budget exceeded: {states} states, budget {budget}")]
    BudgetExceeded { states: u128, budget: u128 },

    #[error("exact count overflows 128-bit arithmetic")]
    CountOverflow,

    #[error("p = {0} is composite; this analysis requires prime p")]
    CompositeP(u64),

    #[error("orbit of size {size} shares no factor with q={q} (rep rows {rep:?})")]
    GcdAssertion { q: u8, size: u64, rep: Vec<Vec<u8>> },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
