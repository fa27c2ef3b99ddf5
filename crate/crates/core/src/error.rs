use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("matrix is too far from SO(3): distance {0:.3e}")]
    NotARotation(f64),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("series length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    ScenarioParse {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },

    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Config(_)
            | Error::LengthMismatch { .. }
            | Error::ScenarioParse { .. }
            | Error::Io { .. }
            | Error::Csv { .. } => 1,
            Error::NonFinite(_)
            | Error::DegenerateGeometry(_)
            | Error::NotARotation(_)
            | Error::NumericalFailure(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
