use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{file}:{line}: {message}")]
    Record {
        file: String,
        line: usize,
        message: String,
    },

    #[error("word {0:?} has no vowels")]
    NoVowel(String),

    #[error("stress position {position} is out of range for {word:?} ({syllables} syllables)")]
    StressOutOfRange {
        word: String,
        position: usize,
        syllables: usize,
    },

    #[error("line has no syllables")]
    EmptyLine,

    #[error("poem has no scannable lines")]
    EmptyPoem,

    #[error("variant product {product} exceeds the enumeration cap {cap}")]
    CapExceeded { product: u128, cap: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("bad configuration: {0}")]
    Config(String),
}
