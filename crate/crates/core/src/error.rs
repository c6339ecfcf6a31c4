use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed rational `{0}` (expected `p/q` or `p`)")]
    Rational(String),
    #[error("malformed polynomial term `{0}`")]
    Term(String),
    #[error("variable index {index} outside x1..x{nvars}")]
    Variable { index: usize, nvars: usize },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomials live in different ambient dimensions ({left} vs {right})")]
    AmbientMismatch { left: usize, right: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("evaluation point has {got} coordinates, expected {expected}")]
    PointLength { expected: usize, got: usize },
    #[error("matrix size mismatch: expected {expected_rows}x{expected_cols}, got {rows}x{cols}")]
    SizeMismatch {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },
    #[error("matrix is not skew-symmetric at entry ({row}, {col})")]
    NotSkew { row: usize, col: usize },
    #[error("matrix is not in the stabilizer of span{{p1,p2}}: entry ({row}, {col}) {reason}")]
    NotInStabilizer {
        row: usize,
        col: usize,
        reason: &'static str,
    },
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("oracle failure: {0}")]
    Oracle(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
