use std::path::PathBuf;

use thiserror::Error;

use crate::scheme::SchemeKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{scheme} needs at least {minimum} vertices (got {n})")]
    TooFewVertices {
        scheme: SchemeKind,
        minimum: usize,
        n: usize,
    },

    #[error("{what}: {edges} edges exceeds the limit of {cap}")]
    SizeCap {
        what: &'static str,
        edges: usize,
        cap: usize,
    },

    #[error("scheme mismatch: expected {expected}, found {found}")]
    SchemeMismatch { expected: String, found: String },

    #[error("relation {relation} ({name}) contains no pairs")]
    EmptyRelation { relation: usize, name: String },

    #[error(
        "regularity violated for relation {relation}: pairs {first:?} and {second:?} have different intersection counts"
    )]
    Regularity {
        relation: usize,
        first: (usize, usize),
        second: (usize, usize),
    },

    #[error("scheme axioms do not hold: {0}")]
    Axioms(String),

    #[error("covariance is not positive semidefinite; offending eigenvalues {0:?}")]
    NotAdmissible(Vec<f64>),

    #[error("element is not symmetric: coefficient of {relation} differs from its adjoint {adjoint}")]
    NotSymmetric { relation: String, adjoint: String },

    #[error("{operation} is not supported for the {scheme} scheme")]
    Unsupported {
        operation: &'static str,
        scheme: SchemeKind,
    },

    #[error("matrix is not in the span of the intersection algebra (relative residual {0:.3e})")]
    OutOfSpan(f64),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
