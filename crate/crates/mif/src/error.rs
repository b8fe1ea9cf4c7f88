use thiserror::Error;

/// Errors shared by the stream, sampler, algorithm, and harness layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("item {item} outside universe [1, {n}]")]
    ItemOutOfRange { item: u64, n: u64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("stream file line {line}: {reason}")]
    StreamParse { line: usize, reason: String },

    #[error("adversary emitted out-of-range item {item} for universe [1, {n}]")]
    AdversaryOutOfRange { item: u64, n: u64 },

    #[error("dealer input is not a permutation of [1, {n}]")]
    NotAPermutation { n: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
