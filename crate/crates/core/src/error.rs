use thiserror::Error;

/// Errors raised by the computational modules.
///
/// Every variant other than [`Error::Parse`] signals a violated mathematical
/// precondition; the CLI maps the two groups onto different exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("Lagrangian is not first order: {0}")]
    NotFirstOrder(String),
    #[error("generator is not a symmetry of the Lagrangian (residue {0})")]
    NotASymmetry(String),
    #[error("Euler-Lagrange equations are not of the form g(d_t^2 x + d_s^2 x) = 0")]
    NonLinearEl,
    #[error("unknown generator family `{0}`")]
    UnknownFamily(String),
    #[error("metric is not symmetric positive definite")]
    NotPositiveDefinite,
    #[error("B-field is not antisymmetric")]
    NotAntisymmetric,
    #[error("lattice basis is singular or its dual pairing is not unimodular")]
    SingularLattice,
    #[error("vector is not in the lattice")]
    NotInLattice,
    #[error("sectors belong to different models")]
    ModelMismatch,
    #[error("T-duality is only available for B = 0")]
    BFieldUnsupported,
    #[error("mode index {index} exceeds truncation level {level}")]
    CutoffExceeded { index: i64, level: usize },
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

impl Error {
    pub fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    /// True for input/grammar errors, false for mathematical precondition failures.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
