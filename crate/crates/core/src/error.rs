use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field too large: {p}^{k} exceeds 2^16")]
    FieldTooLarge { p: u64, k: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("group too large: {0}")]
    GroupTooLarge(String),
    #[error("too many conjugacy classes: {0} (limit 64)")]
    TooManyClasses(usize),
    #[error("class algebra not separated after {0} attempts")]
    NotSeparated(usize),
    #[error("character reconstruction failed: {0}")]
    ReconstructionFailed(String),
    #[error("degree undefined for trivial group")]
    TrivialGroup,
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("Chu requires non-negative functions")]
    NegativeValue,
    #[error("sup norm of input exceeds 1 (found {0})")]
    SupNorm(f64),
    #[error("set is not over a product group")]
    NotProduct,
    #[error("threshold {0} outside [0, 1]")]
    ThresholdOutOfRange(f64),
    #[error("empty set is not syndetic")]
    EmptySet,
    #[error("bad group spec {0:?}")]
    BadSpec(String),
}
