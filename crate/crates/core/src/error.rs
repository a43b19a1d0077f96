use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter fell outside the range an operation supports.
    #[error("{what} = {value} is out of range ({limit})")]
    OutOfRange { what: &'static str, value: u64, limit: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A finite tropical sum reached the infinity sentinel.
    #[error("tropical overflow: {0}")]
    Overflow(String),

    /// `newly_dominated` / `arc_label` evaluated on a pair that is not an arc.
    #[error("word {next} cannot follow word {prev}")]
    NotAnArc { prev: String, next: String },

    #[error("invalid correct word {0:?}")]
    InvalidWord(String),

    #[error("border strips of depth {depth} do not fit disjointly in {m} rows")]
    Partition { m: u32, depth: u32 },

    #[error("encoding failed at column {column}: {reason}")]
    Encoding { column: usize, reason: String },

    #[error("pattern construction failed: {0}")]
    Construction(String),

    #[error("bad matrix file: {0}")]
    Format(String),

    #[error("cannot resume from {}: {reason}", dir.display())]
    Resume { dir: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn out_of_range(what: &'static str, value: impl Into<u64>, limit: impl Into<String>) -> Self {
        Error::OutOfRange { what, value: value.into(), limit: limit.into() }
    }

    /// True for failures caused by files (missing, unreadable or corrupt) rather than by bad parameters.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_) | Error::Resume { .. } | Error::Format(_))
    }
}
