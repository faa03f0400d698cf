use thiserror::Error;

/// Errors produced by table parsing, validation, simulation and enumeration.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed CSV at line {line}: {message}")]
    Csv { line: u64, message: String },

    /// Cell coordinates are 1-based positions in the data grid, as written in the input.
    #[error("invalid cell (row {row}, col {col}): {value:?} is not a nonnegative integer")]
    InvalidCell { row: usize, col: usize, value: String },

    #[error("ragged input: row {row} has {found} data cells, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },

    #[error("table must have at least 2 rows and 2 columns, got {rows}x{cols}")]
    TooSmall { rows: usize, cols: usize },

    #[error("table grand total is zero")]
    ZeroTotal,

    #[error("table grand total {total} exceeds the supported maximum {max}")]
    TotalTooLarge { total: u64, max: u64 },

    #[error("{what} has {found} labels, expected {expected}")]
    LabelCount { what: &'static str, expected: usize, found: usize },

    #[error("invalid null distribution: {0}")]
    InvalidNull(String),

    #[error("power-divergence parameter must be finite, got {0}")]
    NonFiniteLambda(f64),

    #[error("unknown statistic {0:?} (expected chi2, g2, ft, frobenius, nll, all or cr:LAMBDA)")]
    UnknownStatistic(String),

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),

    #[error("exact enumeration needs {required} outcomes, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("cannot merge partial results: {0}")]
    Provenance(String),

    #[error("unknown dataset {name:?}; valid names: {valid}")]
    UnknownDataset { name: String, valid: String },

    #[error("resource failure: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;
