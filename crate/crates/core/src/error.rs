use thiserror::Error;

/// Every failure the library can report.
///
/// Variants are grouped loosely by the module that raises them; the CLI maps
/// all of them to exit status 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported discriminant {0}: expected one of -3, -4, -7, -8, -11")]
    UnsupportedDiscriminant(i64),
    #[error("operands belong to different rings (discriminants {0} and {1})")]
    MixedRings(i64, i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a ramified prime for discriminant {1}")]
    NotRamified(i64, i64),
    #[error("element is not integral: {0}")]
    NotIntegral(String),

    #[error("matrix has non-integral entries")]
    NonIntegralEntries,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not hermitian")]
    NotHermitian,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("gram matrix is singular")]
    SingularGram,
    #[error("first lattice is not contained in the second")]
    NotASublattice,
    #[error("lattice is not integral")]
    NonIntegralLattice,
    #[error("ring action is incompatible with the form: {0}")]
    ActionIncompatible(String),
    #[error("operation requires discriminant {expected}, got {actual}")]
    WrongDiscriminant { expected: i64, actual: i64 },
    #[error("scalar must be nonzero")]
    ZeroScalar,
    #[error("element is not a ramified prime generator")]
    NotRamifiedElement,

    #[error("lattice is not positive definite")]
    NotDefinite,
    #[error("vector is isotropic (h(x,x) = 0)")]
    IsotropicVector,
    #[error("vector is not in the lattice")]
    NotInLattice,
    #[error("expected signature ({expected_p}, 1), got ({p}, {q})")]
    WrongSignature { expected_p: usize, p: usize, q: usize },

    #[error("unknown case {0:?}")]
    UnknownCase(String),
    #[error("d must be a square-free integer > 1, got {0}")]
    BadD(i64),
    #[error("lattice ring {actual} does not match case ring {expected}")]
    RingMismatch { expected: i64, actual: i64 },

    #[error("{path}: {message}")]
    Parse { path: String, message: String },
}

impl Error {
    pub(crate) fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { path: path.into(), message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
