use thiserror::Error;

/// Errors raised by the library. Variants are grouped by the module that
/// produces them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // finite fields
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field of size {0} exceeds the configured bound {1}")]
    FieldTooLarge(u64, u64),
    #[error("field construction failed: {0}")]
    ConstructionError(String),
    #[error("discrete logarithm of zero")]
    LogOfZero,
    #[error("{n} does not divide {order}")]
    OrderDoesNotDivide { n: u64, order: u64 },

    // exact and p-adic arithmetic
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclotomic index mismatch: {0} vs {1}")]
    IndexMismatch(u64, u64),
    #[error("{0} does not divide {1}")]
    NotASubfieldIndex(u64, u64),
    #[error("p-adic precision exhausted")]
    PrecisionExhausted,
    #[error("{0} is not a p-adic integer for p = {1}")]
    NotPIntegral(String, u64),
    #[error("work bound exceeded: {0}")]
    WorkBoundExceeded(String),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("digit expansion: (p^f - 1)a is not an integer")]
    NotIntegralAtF,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    // hypergeometric functions
    #[error("parameters are not defined over Q")]
    NotDefinedOverQ,
    #[error("q = {q} is outside the domain: {reason}")]
    DomainViolation { q: u64, reason: String },
    #[error("degenerate characters: {0}")]
    DegenerateCharacters(String),
    #[error("p = 2 is not supported")]
    EvenPrime,
    #[error("value is not in Z_p: {0}")]
    Unsupported(String),
    #[error("value is not rational")]
    NonRationalFValue,

    // classical series
    #[error("bottom parameter is a nonpositive integer")]
    BottomPole,
    #[error("series does not converge: {0}")]
    NoConvergence(String),
    #[error("Gamma has a pole at {0}")]
    GammaPole(String),
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),

    // oracles
    #[error("bad reduction at p = {0}")]
    BadReduction(u64),
    #[error("prime {0} is too small")]
    SmallPrime(u64),
    #[error("degenerate parameter t = {0}")]
    DegenerateT(String),
    #[error("j-invariant is 0 or 1728")]
    DegenerateJ,
    #[error("leading power of the eta quotient is not a positive integer")]
    NonIntegralLeadingPower,

    // harness
    #[error("unknown identity {0:?}")]
    UnknownIdentity(String),
    #[error("configuration error: {0}")]
    ConfigParse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
