use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("extension degree {0} is not supported (3..=8)")]
    UnsupportedDegree(u32),
    #[error("polynomial {poly:#b} is not primitive of degree {m}")]
    NotPrimitive { m: u32, poly: u32 },
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("no extended BCH code for m = {m}, t = {t}")]
    UnsupportedCode { m: u32, t: usize },
    #[error("invalid channel parameters: Eb/N0 = {ebn0_db} dB, rate = {rate}")]
    InvalidChannel { ebn0_db: f64, rate: f64 },
    #[error("codebook of 2^{k} words is too large to enumerate")]
    CodebookTooLarge { k: usize },
    #[error("candidate list is empty")]
    EmptyList,
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("decoding window holds {actual} blocks, needs {expected}")]
    WindowNotFull { expected: usize, actual: usize },
}
