use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated a documented requirement (zero input, bad modulus, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The request is well-formed but outside the supported range.
    #[error("unsupported range: {0}")]
    UnsupportedRange(String),

    /// A caller-checkable precondition was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// abc-quality is undefined when H(a,b) = 0.
    #[error("undefined quality: H(a,b) = 0 for (n={n}, a={a}, b={b})")]
    UndefinedQuality { n: u32, a: i64, b: i64 },

    /// Census cache on disk does not match the requested run.
    #[error("cache mismatch: {0}")]
    CacheMismatch(String),

    /// Census cache is unreadable or fails bit-exact revalidation.
    #[error("cache corrupt: {0}")]
    CacheCorrupt(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
