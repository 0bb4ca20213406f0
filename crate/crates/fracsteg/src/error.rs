use std::io;
use std::path::PathBuf;

use fracsteg_core::Error as CoreError;

use crate::bmp::BmpError;
use crate::record::RecordError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse failure class; each maps to one process exit code.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Category {
    Params,
    Capacity,
    Format,
    Integrity,
}

impl Category {
    pub fn exit_code(self) -> u8 {
        match self {
            Category::Params => 2,
            Category::Capacity => 3,
            Category::Format => 4,
            Category::Integrity => 5,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Params => "params",
            Category::Capacity => "capacity",
            Category::Format => "format",
            Category::Integrity => "integrity",
        }
    }
}

/// Messages never include key material or map parameters.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    Params(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{}: {source}", path.display())]
    Bmp {
        path: PathBuf,
        #[source]
        source: BmpError,
    },

    #[error("{}: {source}", path.display())]
    Record {
        path: PathBuf,
        #[source]
        source: RecordError,
    },

    #[error("no usable images in {}", .0.display())]
    EmptyDataset(PathBuf),

    #[error("writing output: {0}")]
    Output(#[from] io::Error),

    #[error("writing csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn category(&self) -> Category {
        match self {
            Error::Params(_) => Category::Params,
            Error::Core(e) => core_category(e),
            Error::Io { .. }
            | Error::Bmp { .. }
            | Error::Record { .. }
            | Error::EmptyDataset(_)
            | Error::Output(_)
            | Error::Csv(_) => Category::Format,
        }
    }

    pub fn exit_code(&self) -> u8 {
        self.category().exit_code()
    }
}

fn core_category(e: &CoreError) -> Category {
    match e {
        CoreError::Quality
        | CoreError::MapParams(_)
        | CoreError::NonFinite { .. }
        | CoreError::DegenerateMap { .. }
        | CoreError::KeyLength
        | CoreError::KeyHex
        | CoreError::ChunkLength(_) => Category::Params,
        CoreError::Capacity { .. } => Category::Capacity,
        CoreError::Header { .. } => Category::Integrity,
        CoreError::Dimensions { .. }
        | CoreError::Channels(_)
        | CoreError::SampleCount { .. }
        | CoreError::Geometry { .. }
        | CoreError::GeometryMismatch
        | CoreError::ZeroCover
        | CoreError::TooFewSamples(_)
        | CoreError::NonFiniteInput => Category::Format,
    }
}
