use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("missing input file {}", .0.display())]
    MissingFile(PathBuf),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{file}:{line}: {message}")]
    MalformedRow {
        file: String,
        line: u64,
        message: String,
    },

    #[error("{file}:{line}: duplicate key {key}")]
    DuplicateKey { file: String, line: u64, key: String },

    #[error("dangling reference in {file}: {detail}")]
    Dangling { file: String, detail: String },

    #[error("cost table: {0}")]
    CostTable(String),

    #[error("no cost entry for UDA {uda} / {rank}")]
    UnknownCostEntry { uda: u8, rank: String },

    #[error("unregistered SDS {0}")]
    UnregisteredSds(String),

    #[error("no baseline for year {year}, subject category {sc}")]
    MissingBaseline { year: i32, sc: String },

    #[error("no impact factor for journal {journal} in {year}")]
    MissingImpactFactor { journal: String, year: i32 },

    #[error("byline position {position} out of range for {n_authors} authors")]
    PositionOutOfRange { position: usize, n_authors: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config: {0}")]
    Config(String),

    #[error("empty unit {0}")]
    EmptyUnit(String),

    #[error("duplicate unit key {0}")]
    DuplicateUnit(String),

    #[error("units present in only one ranking: {}", .0.join(", "))]
    UnmatchedUnits(Vec<String>),

    #[error("design matrix is rank deficient; collinear columns: {}", .0.join(", "))]
    RankDeficient(Vec<String>),

    #[error("{0}")]
    Stats(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
