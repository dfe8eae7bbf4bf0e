use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("argument must be at least 1, got 0 ({0})")]
    Zero(&'static str),

    #[error("moment exponent must be odd, got {0}")]
    EvenMoment(u32),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("prime must be at least {min}, got {ell}")]
    PrimeTooSmall { ell: u64, min: u64 },

    #[error("residue {r} is out of range for modulus {ell}")]
    ResidueOutOfRange { r: u64, ell: u64 },

    #[error("modulus {0} is outside the supported range [2, 2^32)")]
    UnsupportedModulus(u64),

    #[error("series live in different rings ({left} vs {right})")]
    RingMismatch { left: String, right: String },

    #[error("series truncations differ ({left} vs {right})")]
    TruncationMismatch { left: usize, right: usize },

    #[error("series truncated at {available} but index {needed} is required")]
    TruncationTooShort { needed: usize, available: usize },

    #[error("constant term is not a unit in {0}")]
    NonUnit(String),

    #[error("invalid exponent sequence: {0}")]
    InvalidExponents(String),

    #[error("invalid divisor weight: {0}")]
    InvalidWeight(String),

    #[error("enumeration oracle is limited to n <= {guard}, got {requested}")]
    OracleGuard { requested: usize, guard: usize },

    #[error(
        "generating {ensemble} to N={requested} exceeds the default limit {limit}; \
         pass the explicit override to proceed"
    )]
    GenerationLimit {
        ensemble: String,
        requested: usize,
        limit: usize,
    },

    #[error("a series of {requested} coefficients exceeds the memory cap of {cap}")]
    ResourceCap { requested: usize, cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown ensemble {0:?}")]
    UnknownEnsemble(String),
}

pub type Result<T> = std::result::Result<T, Error>;
