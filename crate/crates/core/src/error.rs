use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("characteristic {0} is too small (need p > 3)")]
    CharTooSmall(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field size {p}^{k} exceeds the enumeration ceiling {ceiling}")]
    SizeExceeded { p: u64, k: u32, ceiling: u64 },

    #[error("rational function is constant")]
    ConstantMap,
    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("invalid quadratic form ({a}, {b}, {c})")]
    InvalidForm { a: i64, b: i64, c: i64 },
    #[error("{0} is not a negative discriminant (need D < 0, D = 0 or 1 mod 4)")]
    InvalidDiscriminant(i64),

    #[error("curve is singular")]
    Singular,
    #[error("curves are defined over different fields")]
    ContextMismatch,
    #[error("trace {t} violates the Hasse bound for q = {q}")]
    HasseViolation { t: i64, q: u64 },
    #[error("p = {p} divides the trace {t} (supersingular)")]
    PDividesTrace { p: u64, t: i64 },
    #[error("level {level} is not admissible here: {reason}")]
    BadLevel { level: u64, reason: &'static str },

    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("family {family} is not defined in characteristic {p}")]
    BadCharacteristic { family: String, p: u64 },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("family discriminant is identically zero")]
    SingularFamily,
    #[error("marked point has order {found} instead of {expected} at parameter index {lambda}")]
    MarkedPointOrderViolation {
        lambda: u64,
        expected: u64,
        found: String,
    },
    #[error("bound violated at t = {t}: count {count} > bound {bound}")]
    BoundViolation { t: i64, count: u64, bound: u64 },

    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
