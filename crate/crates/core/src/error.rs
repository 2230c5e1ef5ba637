use thiserror::Error;

use crate::surface::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("surface signatures differ")]
    SignatureMismatch,
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(ValidationReport),
    #[error("invalid graph: {0}")]
    InvalidGraph(ValidationReport),
    #[error("graph is not generic: {0}")]
    NonGeneric(String),
    #[error("wall welds do not close: {0}")]
    WallMismatch(String),
    #[error("not realizable: {0}")]
    NonRealizable(String),
    #[error("invalid block spec: {0}")]
    InvalidSpec(String),
    #[error("move is not applicable: {0}")]
    InapplicableMove(String),
    #[error("normalization stuck after exploring {explored} graphs")]
    NormalizationStuck { explored: usize, graph: String },
    #[error("{0} is an exceptional value")]
    ExceptionalValue(String),
    #[error("gluing mismatch: {0}")]
    GluingMismatch(String),
    #[error("interface mismatch: {0}")]
    InterfaceMismatch(String),
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}
