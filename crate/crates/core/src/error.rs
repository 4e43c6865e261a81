use thiserror::Error;

use crate::groupoid::FunctorViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input has the wrong shape (dimensions, indices out of range, bad JSON fields).
    #[error("format error: {0}")]
    Format(String),

    /// Input is well formed but fails the structural axioms it claims.
    #[error("invalid {what}: {detail}")]
    Invalid { what: &'static str, detail: String },

    /// An operation was called outside its domain of definition.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("carrier mismatch: {left} vs {right}")]
    CarrierMismatch { left: usize, right: usize },

    /// A constructed map failed functor verification.
    #[error("functor check failed: {0}")]
    Functor(FunctorViolation),

    /// The germ relation, or an operation defined on germ representatives,
    /// depends on the chosen representative.
    #[error("not well defined on germs: {0}")]
    NotWellDefined(String),

    #[error("search space bound {bound:.3e} exceeds the limit {limit:.0e}; pass force to run anyway")]
    Guardrail { bound: f64, limit: f64 },

    #[error("weight for {key} must be strictly positive")]
    NonPositiveWeight { key: String },

    #[error("no weight given for morphism {0}")]
    MissingWeight(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(what: &'static str, detail: impl ToString) -> Self {
        Error::Invalid {
            what,
            detail: detail.to_string(),
        }
    }
}
