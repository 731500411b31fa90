use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("non-finite value at row {row}, column {column}")]
    NonFinite { row: usize, column: usize },

    #[error("column {column}{} has zero variance", .name.as_ref().map(|n| alloc::format!(" ({n})")).unwrap_or_default())]
    DegenerateColumn { column: usize, name: Option<String> },

    #[error("invalid correlation matrix: {0}")]
    InvalidCorrelation(String),

    #[error("at least two knots are needed to form a statistic, found {found}")]
    InsufficientKnots { found: usize },

    #[error("last signal step m = {m} must be smaller than the number of knots ({knots})")]
    InvalidSignalStep { m: usize, knots: usize },

    #[error("{what}: {value} is outside {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("need at least {required} samples, got {got}")]
    TooFewSamples { required: usize, got: usize },

    #[error("invalid scenario: {0}")]
    Scenario(String),

    #[error("{0} failed to converge")]
    NoConvergence(&'static str),
}
