// SPDX-License-Identifier: Apache-2.0

use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grammar: {0}")]
    Grammar(String),

    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(char),

    #[error("symbol id {0} is out of range for an alphabet of {1} symbols")]
    SymbolOutOfRange(usize, usize),

    #[error("state space of {required} configurations exceeds the cap of {cap}")]
    StateCapExceeded { required: u128, cap: usize },

    #[error("no valid strings of length {0}")]
    EmptySlice(usize),

    #[error("length plan: {0}")]
    InvalidPlan(String),

    #[error("split: {0}")]
    InvalidSplit(String),

    #[error("separator {0:?} collides with an alphabet symbol")]
    SeparatorCollision(char),

    #[error("corpus has {0} symbols; at least 2 are required")]
    CorpusTooShort(usize),

    #[error("distance {distance} out of range 1..={max}")]
    DistanceOutOfRange { distance: usize, max: usize },

    #[error("empty count vector")]
    EmptyCounts,

    #[error("corpus has more than {0} distinct symbols")]
    TooManySymbols(usize),

    #[error("recipe: {0}")]
    Recipe(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Grammar(_)
            | Error::UnknownSymbol(_)
            | Error::SymbolOutOfRange(..)
            | Error::InvalidPlan(_)
            | Error::InvalidSplit(_)
            | Error::SeparatorCollision(_)
            | Error::DistanceOutOfRange { .. }
            | Error::TooManySymbols(_)
            | Error::Recipe(_) => 2,
            Error::EmptySlice(_)
            | Error::StateCapExceeded { .. }
            | Error::CorpusTooShort(_)
            | Error::EmptyCounts => 3,
            Error::Io { .. } => 4,
        }
    }
}
