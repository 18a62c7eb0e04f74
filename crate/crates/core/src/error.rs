use thiserror::Error;

/// Errors surfaced by the exact-arithmetic kernels.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("field order {0} exceeds the supported bound 2^16")]
    DegreeOverflow(u128),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("series scales differ: {0} vs {1}")]
    ScaleMismatch(i64, i64),
    #[error("inversion of a value that is zero at its precision")]
    ZeroInversion,
    #[error("division by the zero polynomial")]
    ZeroDivision,
    #[error(
        "u-exponent {exponent} not divisible by q^{power}; value has no such root in this field"
    )]
    ExponentNotDivisible { exponent: i64, power: u32 },
    #[error("{0} does not embed into {1} as constructed")]
    NotASubfield(String, String),
    #[error("argument does not satisfy the convergence bound (q-1)*deg(alpha) < n*q")]
    ConvergenceBound,
    #[error("denominator {den} is divisible by the characteristic {p}")]
    BadDenominator { den: i64, p: u64 },
    #[error("empty input")]
    EmptyInput,
    #[error("underdetermined system: {rows} usable rows for {cols} unknowns")]
    Underdetermined { rows: usize, cols: usize },
    #[error("resource cap reached: {0}")]
    ResourceCap(String),
    #[error("incompatible blocks: {0}")]
    BlockMismatch(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
