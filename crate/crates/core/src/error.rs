use thiserror::Error;

use crate::axioms::AxiomReport;
use crate::numeric::Vector;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vector must have at least one entry")]
    EmptyVector,

    #[error("entry {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{0} must not be empty")]
    EmptySet(&'static str),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("{what} (residual {residual:e})")]
    ContractViolation { what: String, residual: f64 },

    #[error("constrained simplex slice is empty for y = {y:?}")]
    EmptySlice { y: Vector },

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("axiom pre-check failed: {0}")]
    Precheck(Box<AxiomReport>),

    #[error("no convergence after {steps} doublings")]
    NonConvergence { steps: u32 },

    #[error("{what} has size {size}, limit is {limit}")]
    LimitExceeded {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("operator evaluation failed at {input:?}: {source}")]
    Evaluation {
        input: Vector,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
