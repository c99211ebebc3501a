use thiserror::Error;

/// Errors shared across the library modules.
#[derive(Debug, Error)]
pub enum Error {
    /// Eta-quotient prefactor `sum d*r / 24` is not a nonnegative integer.
    #[error("eta quotient has non-integral or negative leading exponent {num}/24")]
    FractionalEtaExponent { num: i64 },

    /// Series inversion requires constant term +1 or -1.
    #[error("series is not invertible: constant term must be 1 or -1")]
    NonInvertibleSeries,

    #[error("unknown form label `{0}`")]
    UnknownForm(String),

    #[error("modulus {0} is not of the form 4N with N odd and square-free")]
    BadModulus(u64),

    /// `|lambda(p)| > 2 + slack`: the input data cannot come from a valid
    /// eigenform table, so this signals corruption rather than rounding.
    #[error("Deligne bound violated: |lambda| = {0}")]
    DeligneViolation(f64),

    #[error("index {n} exceeds coefficient table order {order}")]
    OrderExceeded { n: u64, order: u64 },

    #[error("prime {0} divides the context (4Nt or the level)")]
    BadPrime(u64),

    #[error("no admissible primes for this family")]
    EmptyFamily,

    #[error("character has order {order} > 2; the exact integer path needs a real character")]
    ComplexCharacter { order: u64 },

    #[error("Hecke verification failed: {0}")]
    Hecke(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("csv: {0}")]
    Csv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
