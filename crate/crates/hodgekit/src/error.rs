//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("operator is not nilpotent")]
    NotNilpotent,
    #[error("operator is not real")]
    NotReal,
    #[error("pair (F, W) is not a mixed Hodge structure: {0}")]
    NotMhs(String),
    #[error("instance fails validation: {0}")]
    InvalidInstance(String),
    #[error("relative weight filtration does not exist: {0}")]
    RelativeFiltrationMissing(String),
    #[error("sl2 splitting unsupported: {0}")]
    UnsupportedLength(String),
    #[error("target filtration is outside the chart of the base point")]
    OutOfChart,
    #[error("no sl2 triple: {0}")]
    NoTriple(String),
    #[error("not a biextension instance: {0}")]
    NotBiextension(String),
    #[error("no central solution for the biextension map")]
    NoCentralSolution,
    #[error("cone is not of even type: {0}")]
    NotEvenType(String),
    #[error("odd-type cones are not supported")]
    OddTypeUnsupported,
    #[error("local normal form data is invalid: {0}")]
    InvalidNormalForm(String),
    #[error("sl2 data is invalid: {0}")]
    InvalidSl2Data(String),
    #[error("grid specification error: {0}")]
    Grid(String),
    #[error("sequence not classified: {0}")]
    NotClassified(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
