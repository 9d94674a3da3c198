use thiserror::Error;

/// Errors produced anywhere in the recession-cone pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {what}: expected {expected}, got {actual}")]
    DimensionMismatch {
        what: String,
        expected: usize,
        actual: usize,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("the primal feasible set is empty")]
    InfeasiblePrimal,

    #[error("no strictly feasible point found (max eigenvalue bound t* = {margin:.3e}); recession computation refused")]
    SlaterViolated { margin: f64 },

    #[error("c is not in the interior of the ordering cone (min n_i^T c = {margin:.3e})")]
    CNotInterior { margin: f64 },

    #[error("ordering cone is not pointed, trivial, or lacks interior: {0}")]
    BadOrderingCone(String),

    #[error("objective is not C-convex: min eigenvalue {min_eig:.3e} at weight ray {ray}")]
    NotCConvex { min_eig: f64, ray: usize },

    #[error("numerical degeneracy in double description: {0}")]
    NumericalDegeneracy(String),

    #[error("projection is the trivial cone {{0}}")]
    EmptyProjection,

    #[error("solver backend failure in {query}: {detail}")]
    Backend { query: String, detail: String },

    #[error("iteration budget of {max_iter} exhausted with achieved delta {achieved:.3e}")]
    IterationBudgetExceeded {
        max_iter: usize,
        achieved: f64,
        partial: Box<crate::convproj::BodyApproximation>,
    },

    #[error("weight is not in the dual ordering cone")]
    WNotInDualCone,

    #[error("parse error at line {line}, field `{field}`: {msg}")]
    Parse {
        line: usize,
        field: String,
        msg: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dims(what: impl Into<String>, expected: usize, actual: usize) -> Self {
        Error::DimensionMismatch {
            what: what.into(),
            expected,
            actual,
        }
    }

    pub(crate) fn backend(query: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Backend {
            query: query.into(),
            detail: detail.into(),
        }
    }
}
