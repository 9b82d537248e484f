use num_bigint::BigUint;
use thiserror::Error;

use crate::exact::ExactRational;

pub type Result<T> = std::result::Result<T, Error>;

/// Domain errors raised by the library.
///
/// Every variant maps to a short, stable reason string (see [`Error::reason`])
/// that the command-line front end prints for machine consumption.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("gcd(0, 0) is undefined")]
    ZeroGcd,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("slope numerator must be nonzero")]
    ZeroSlope,
    #[error("degenerate slope {q1}/{q2} for s = {s}: s*q1^2 = q2^2")]
    DegenerateSlope { s: BigUint, q1: BigUint, q2: BigUint },
    #[error("conic parameter s must be positive")]
    ZeroParameter,
    #[error("multiplier must be nonzero")]
    ZeroMultiplier,
    #[error("({x}, {y}, {z}) does not solve x^2 - y^2 = {s} z^2 with x > y > 0, z > 0")]
    InvalidConicSolution { s: BigUint, x: BigUint, y: BigUint, z: BigUint },
    #[error("energy levels must be positive")]
    ZeroLevel,
    #[error("non-positive difference: upper level {upper} must exceed lower level {lower}")]
    NonPositiveDifference { upper: BigUint, lower: BigUint },
    #[error("sides unequal: {left} != {right}")]
    SidesUnequal {
        left: Box<ExactRational>,
        right: Box<ExactRational>,
    },
    #[error("solutions belong to different conics (s = {left} vs s = {right})")]
    MismatchedConic { left: BigUint, right: BigUint },
    #[error("a chain needs at least 2 members, got {0}")]
    TooFewMembers(usize),
    #[error("chain contains a repeated transition {upper} -> {lower}")]
    DuplicateTransition { upper: BigUint, lower: BigUint },
    #[error("a prime set needs at least 2 primes, got {0}")]
    TooFewPrimes(usize),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} listed more than once")]
    DuplicatePrime(u64),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("partition {0} repeats an earlier one")]
    DuplicatePartition(usize),
    #[error("partition {0} has equal products on both sides")]
    EqualGammas(usize),
    #[error("delta {delta} is not divisible by {divisor} (partition {partition})")]
    DeltaNotDivisible {
        delta: BigUint,
        divisor: BigUint,
        partition: usize,
    },
    #[error("difference must be positive, got {0}")]
    NonPositiveDelta(Box<ExactRational>),
    #[error("level bound must be at least 2, got {0}")]
    BoundTooSmall(u64),
    #[error("level bound {bound} exceeds the guard of {limit}; an explicit override is required")]
    BoundTooLarge { bound: u64, limit: u64 },
    #[error("cannot parse {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Stable short reason, suitable for scripts.
    pub fn reason(&self) -> &'static str {
        match self {
            Error::ZeroGcd => "gcd of zeros",
            Error::ZeroDenominator => "zero denominator",
            Error::ZeroSlope => "zero slope",
            Error::DegenerateSlope { .. } => "degenerate slope",
            Error::ZeroParameter => "zero parameter",
            Error::ZeroMultiplier => "zero multiplier",
            Error::InvalidConicSolution { .. } => "invalid conic solution",
            Error::ZeroLevel => "zero level",
            Error::NonPositiveDifference { .. } => "non-positive difference",
            Error::SidesUnequal { .. } => "sides unequal",
            Error::MismatchedConic { .. } => "mismatched conic",
            Error::TooFewMembers(_) => "too few members",
            Error::DuplicateTransition { .. } => "duplicate transition",
            Error::TooFewPrimes(_) => "too few primes",
            Error::NotPrime(_) => "not prime",
            Error::DuplicatePrime(_) => "duplicate prime",
            Error::InvalidPartition(_) => "invalid partition",
            Error::DuplicatePartition(_) => "duplicate partition",
            Error::EqualGammas(_) => "equal gammas",
            Error::DeltaNotDivisible { .. } => "delta not divisible",
            Error::NonPositiveDelta(_) => "non-positive delta",
            Error::BoundTooSmall(_) => "bound too small",
            Error::BoundTooLarge { .. } => "bound too large",
            Error::Parse(_) => "parse error",
            Error::Internal(_) => "internal error",
        }
    }
}
