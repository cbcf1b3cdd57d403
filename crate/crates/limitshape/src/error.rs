use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cell ({row}, {col}) is not in the diagram")]
    CellOutsideDiagram { row: usize, col: usize },
    #[error("diagram is empty")]
    EmptyDiagram,
    #[error("shape does not fit in the {rows}x{cols} rectangle")]
    ShapeExceedsRectangle { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("not a standard filling: {0}")]
    NotStandard(String),
    #[error("argument out of domain: {0}")]
    OutOfDomain(String),
    #[error("input is not monotone: {0}")]
    NonMonotone(String),
    #[error("constraints are infeasible: {0}")]
    Infeasible(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("empty input: {0}")]
    EmptyInput(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
