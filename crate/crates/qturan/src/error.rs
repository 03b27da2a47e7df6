use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {0} exceeds the explicit-family cap {1}")]
    DimTooLarge(u32, u32),
    #[error("element {element} out of range 1..={n}")]
    ElementOutOfRange { element: u32, n: u32 },
    #[error("duplicate set {0}")]
    DuplicateSet(String),
    #[error("level {level} out of range 0..={n}")]
    LevelOutOfRange { level: u32, n: u32 },
    #[error("parameter out of range: {0}")]
    ParamRange(String),
    #[error("pattern has a directed cycle")]
    PatternCycle,
    #[error("malformed pattern spec: {0}")]
    PatternSpec(String),
    #[error("pattern has {m} vertices, cap is {max}")]
    PatternTooLarge { m: usize, max: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("chain statistics need n <= {max}, got n = {n}")]
    DpCap { n: u32, max: u32 },
    #[error("search guard exceeded: {0}")]
    Guard(String),
    #[error("family is not {0}-free")]
    NotFree(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
