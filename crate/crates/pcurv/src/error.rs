use thiserror::Error;

/// Errors surfaced by the library. Variant names follow the per-operation
/// contracts so the CLI can report them verbatim.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("denominator of a_{0} is divisible by p")]
    DenominatorDivisibleByP(u64),
    #[error("constant term is not a unit, series is not invertible")]
    NonUnitConstantTerm,
    #[error("nonzero coefficient at index {0}, which is not a multiple of p")]
    NonPthPower(usize),
    #[error("series precision {have} too low, need more than {need}")]
    PrecisionTooLow { have: usize, need: usize },
    #[error("denominator vanishes at t = 0, no power series expansion")]
    DenominatorVanishesAtZero,
    #[error("alpha_{m} is not an integer for p = {p}; Wilson factorization falsified")]
    NonIntegerAlpha { m: u64, p: u64 },
    #[error("series precision {have} is below the {need} coefficients the guess needs")]
    InsufficientPrecision { have: usize, need: usize },
    #[error("the zero polynomial annihilates nothing")]
    ZeroPolynomial,
    #[error("spec is not integral: a_{n} = {value} is not an integer")]
    NonIntegral { n: u64, value: String },
    #[error("spec is unbalanced: sum(c) = {c_sum}, sum(d) = {d_sum}")]
    Unbalanced { c_sum: u64, d_sum: u64 },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("guard must be at least 8, got {0}")]
    GuardTooSmall(u32),
}

pub type Result<T> = std::result::Result<T, Error>;
