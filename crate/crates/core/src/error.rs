use thiserror::Error;

/// Every failure the library can report.
///
/// Variants are grouped by the subsystem that raises them; `ErrorClass`
/// collapses them into the coarse classes used for process exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("discriminant {0} is not negative")]
    NotImaginary(i64),
    #[error("operands live in different fields (d = {0} and d = {1})")]
    MixedFields(i64, i64),
    #[error("could not factor {0} within the configured effort")]
    FactorizationIncomplete(u128),
    #[error("the zero ideal is not allowed here")]
    ZeroIdeal,
    #[error("ideal is not integral")]
    NotIntegral,
    #[error("ideal is not coprime to the modulus")]
    NotCoprime,

    #[error("lattice is odd")]
    OddLattice,
    #[error("lattice is degenerate")]
    DegenerateLattice,
    #[error("matrix is not an isometry of the lattice")]
    NotAnIsometry,
    #[error("identification does not negate the discriminant forms")]
    IncompatibleForms,
    #[error("dimension mismatch: {0}")]
    Shape(String),

    #[error("primitive part has non-fundamental discriminant {0}; the order is not maximal")]
    NonMaximalOrder(i64),
    #[error("Gram matrix is not even")]
    NotEven,
    #[error("Gram matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("trace pairing is not integral and even on the ideal")]
    NotIntegralPairing,

    #[error("modulus norm {norm} exceeds the residue cap {cap}")]
    ModulusTooLarge { norm: u128, cap: u128 },
    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("{0} is not a prime power")]
    InvalidPrimePower(i64),
    #[error("inconsistent invariants: {0}")]
    InconsistentInvariants(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse error classes, one per documented exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Parse,
    Field,
    Factorization,
    Lattice,
    Type,
    NonMaximalOrder,
    Modulus,
    NotApplicable,
    Formula,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Parse => 2,
            ErrorClass::Field => 3,
            ErrorClass::Factorization => 4,
            ErrorClass::Lattice => 5,
            ErrorClass::Type => 6,
            ErrorClass::NonMaximalOrder => 7,
            ErrorClass::Modulus => 8,
            ErrorClass::NotApplicable => 9,
            ErrorClass::Formula => 10,
        }
    }
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse(_) | Error::Shape(_) => ErrorClass::Parse,
            Error::NotFundamental(_)
            | Error::NotImaginary(_)
            | Error::MixedFields(..)
            | Error::ZeroIdeal
            | Error::NotIntegral
            | Error::NotCoprime => ErrorClass::Field,
            Error::FactorizationIncomplete(_) => ErrorClass::Factorization,
            Error::OddLattice
            | Error::DegenerateLattice
            | Error::NotAnIsometry
            | Error::IncompatibleForms => ErrorClass::Lattice,
            Error::NotEven | Error::NotPositiveDefinite | Error::NotIntegralPairing => {
                ErrorClass::Type
            }
            Error::NonMaximalOrder(_) => ErrorClass::NonMaximalOrder,
            Error::ModulusTooLarge { .. } => ErrorClass::Modulus,
            Error::NotApplicable(_) => ErrorClass::NotApplicable,
            Error::InvalidPrimePower(_) | Error::InconsistentInvariants(_) => ErrorClass::Formula,
        }
    }
}
