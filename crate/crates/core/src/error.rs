use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Cholesky hit a pivot below `n·eps·max_diag`.
    #[error("NotPositiveDefinite: pivot {pivot:e} at row {row} (threshold {threshold:e})")]
    NotPositiveDefinite { row: usize, pivot: f64, threshold: f64 },

    #[error("NoConvergence: Jacobi iteration did not converge in {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("DimensionMismatch: expected {expected}, found {found} ({what})")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("NonSymmetric: entry ({row},{col}) differs from its transpose by {diff:e}")]
    NonSymmetric { row: usize, col: usize, diff: f64 },

    #[error("NonFinite: {0}")]
    NonFinite(&'static str),

    #[error("InvalidInput: {0}")]
    InvalidInput(String),

    #[error("InvalidL: l = {l} must lie in [1, {n}]")]
    InvalidL { l: usize, n: usize },

    #[error("SpectraplexViolation: {0}")]
    SpectraplexViolation(String),

    #[error("OrderViolation: requires lambda_1(x) = {fx} > lambda_1(y) = {fy}")]
    OrderViolation { fx: f64, fy: f64 },

    #[error("InfeasibleSet: xmin * sum(l) = {lower_volume} exceeds V0 = {volume}")]
    InfeasibleSet { lower_volume: f64, volume: f64 },

    #[error("InvalidSet: {0}")]
    InvalidSet(String),

    #[error("InvalidConfig: {0}")]
    InvalidConfig(String),

    #[error("BracketInvalid: {0}")]
    BracketInvalid(String),

    #[error("UnderConstrained: {fixed} fixed dofs cannot remove the 3 planar rigid-body modes")]
    UnderConstrained { fixed: usize },

    #[error("DofOutOfRange: {what} index {index} (limit {limit})")]
    DofOutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },

    #[error("InvalidTruss: {0}")]
    InvalidTruss(String),

    /// An error raised while evaluating iterate `iteration` of a solver.
    #[error("at iterate {iteration}: {source}")]
    AtIterate {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("Io: {0}")]
    Io(String),

    #[error("Parse: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn at(self, iteration: usize) -> Self {
        match self {
            Error::AtIterate { .. } => self,
            other => Error::AtIterate {
                iteration,
                source: Box::new(other),
            },
        }
    }

    /// The innermost error, stripping iterate context.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtIterate { source, .. } => source.root(),
            other => other,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
