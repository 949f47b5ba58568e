use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("segment span {span} exceeds the configured maximum of {max}")]
    SpanTooLarge { span: u64, max: u64 },

    #[error("bound {0} exceeds the supported range (must be below 2^63)")]
    BoundTooLarge(u64),

    #[error("empty interval: lo {lo} must be below hi {hi}")]
    EmptyInterval { lo: u64, hi: u64 },

    #[error("prime indices are 1-based; index 0 is not valid")]
    ZeroIndex,

    #[error("prime index {index} lies beyond the universe bound {bound}")]
    BeyondUniverse { index: u64, bound: u64 },

    #[error("indices must be strictly ascending (violated at position {position})")]
    NotAscending { position: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("series of length {got} is too short: need at least {needed}")]
    TooShort { needed: usize, got: usize },

    #[error("signed 64-bit overflow while computing {0}")]
    Overflow(&'static str),

    #[error("degenerate sample: {0}")]
    Degenerate(&'static str),

    #[error("malformed checkpoint cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
