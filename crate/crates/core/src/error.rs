//! Error type shared by every module of the crate.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is reducible over F_{p}")]
    ReducibleModulus { p: u64 },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("no built-in modulus for F_{p}^{m}")]
    NoBuiltinModulus { p: u64, m: usize },
    #[error("field of order {p}^{m} is too large for this library")]
    FieldTooLarge { p: u64, m: usize },
    #[error("{0} is not a prime power")]
    NotAPrimePower(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("invalid field element: {0}")]
    InvalidElement(String),
    #[error("enumeration of {needed} items exceeds the budget of {budget}")]
    BudgetExceeded {
        needed: u128,
        budget: u128,
        /// Partial bounds on the quantity being computed, when available.
        bounds: Option<(usize, usize)>,
    },
    #[error("series is not a unit (constant term is zero)")]
    NotAUnit,
    #[error("substituted series must have zero constant term")]
    NonvanishingConstantTerm,
    #[error("precision underflow: {0}")]
    PrecisionUnderflow(String),
    #[error("series has a pole of order {0}")]
    Pole(i64),
    #[error("series is not a reparametrization (needs c0 = 0 and c1 != 0)")]
    NotAReparametrization,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("{subsets} column subsets exceed the cap of {cap}")]
    CombinatorialBudgetExceeded { subsets: u128, cap: u128 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("point ({0}, 0) is a two-torsion point; no local data is defined there")]
    TwoTorsionPoint(String),
    #[error("point is not on the curve: {0}")]
    PointNotOnCurve(String),
    #[error("curve is singular (4A^3 + 27B^2 = 0)")]
    SingularCurve,
    #[error("dual bundle has negative degree: {0}")]
    NegativeDualDegree(String),
    #[error("invalid code spec: {0}")]
    InvalidSpec(String),
    #[error("generator rank {actual} differs from the expected dimension {expected}")]
    RankDeficiency { expected: usize, actual: usize },
    #[error("rank metric needs blocks of equal size")]
    NonUniformBlocks,
    #[error("block structures differ")]
    BlockMismatch,
    #[error("order mismatch: {0}")]
    OrderMismatch(String),
    #[error("vector is zero")]
    ZeroVector,
    #[error("invalid target: {0}")]
    InvalidTarget(String),
    #[error("matrix is not of full row rank")]
    RankDeficient,
    #[error("field of order {q} is too small for k = {k}")]
    FieldTooSmall { q: u64, k: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::ReducibleModulus { .. } => "ReducibleModulus",
            Error::InvalidModulus(_) => "InvalidModulus",
            Error::NoBuiltinModulus { .. } => "NoBuiltinModulus",
            Error::FieldTooLarge { .. } => "FieldTooLarge",
            Error::NotAPrimePower(_) => "NotAPrimePower",
            Error::DivisionByZero => "DivisionByZero",
            Error::FieldMismatch => "FieldMismatch",
            Error::InvalidElement(_) => "InvalidElement",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::NotAUnit => "NotAUnit",
            Error::NonvanishingConstantTerm => "NonvanishingConstantTerm",
            Error::PrecisionUnderflow(_) => "PrecisionUnderflow",
            Error::Pole(_) => "Pole",
            Error::NotAReparametrization => "NotAReparametrization",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::Singular => "Singular",
            Error::CombinatorialBudgetExceeded { .. } => "CombinatorialBudgetExceeded",
            Error::Unsupported(_) => "Unsupported",
            Error::TwoTorsionPoint(_) => "TwoTorsionPoint",
            Error::PointNotOnCurve(_) => "PointNotOnCurve",
            Error::SingularCurve => "SingularCurve",
            Error::NegativeDualDegree(_) => "NegativeDualDegree",
            Error::InvalidSpec(_) => "InvalidSpec",
            Error::RankDeficiency { .. } => "RankDeficiency",
            Error::NonUniformBlocks => "NonUniformBlocks",
            Error::BlockMismatch => "BlockMismatch",
            Error::OrderMismatch(_) => "OrderMismatch",
            Error::ZeroVector => "ZeroVector",
            Error::InvalidTarget(_) => "InvalidTarget",
            Error::RankDeficient => "RankDeficient",
            Error::FieldTooSmall { .. } => "FieldTooSmall",
            Error::Parse(_) => "Parse",
        }
    }
}
