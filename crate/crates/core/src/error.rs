use crate::C64;

pub type Result<T> = std::result::Result<T, MgfError>;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum MgfError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("Schur iteration did not converge (matrix digest {digest})")]
    Convergence { digest: String },

    #[error("cluster of size {cluster_size} needs more derivatives than available")]
    DerivativeOrder { cluster_size: usize },

    #[error("argument lies on a pole: eigenvalue {eigenvalue} is a nonpositive integer")]
    Pole { eigenvalue: C64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("parameters must commute: {0}")]
    Commutativity(String),

    #[error("invalid parameter shift: {0}")]
    InvalidShift(String),

    #[error("series truncated after {terms} terms (tail estimate {tail_estimate:e})")]
    Truncation { terms: usize, tail_estimate: f64 },

    #[error("quadrature hit the subdivision cap {subdivisions} (error estimate {error_estimate:e})")]
    MaxSubdivisions {
        subdivisions: usize,
        error_estimate: f64,
    },

    #[error("integrand is not finite at t = {t}")]
    NonFiniteIntegrand { t: f64 },

    #[error("divergent integral: {0}")]
    DivergentIntegral(String),

    #[error("unknown identity {0}")]
    UnknownIdentity(String),

    #[error("input generator could not satisfy its constraints: {0}")]
    GeneratorInfeasible(String),

    #[error("{0}")]
    Io(String),
}

impl MgfError {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            MgfError::Parse { .. } | MgfError::NonFinite { .. } | MgfError::Dimension(_) => 4,
            MgfError::Truncation { .. } => 3,
            MgfError::UnknownIdentity(_) => 5,
            MgfError::Io(_) => 1,
            _ => 2,
        }
    }
}
