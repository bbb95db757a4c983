use thiserror::Error;

/// Errors raised anywhere in the synthesis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("LTL parse error at position {pos}: {msg}")]
    LtlParse { pos: usize, msg: String },

    #[error("malformed specification: {0}")]
    Json(#[from] serde_json::Error),

    #[error("invalid specification: {0}")]
    Spec(String),

    #[error("undeclared atom `{0}`")]
    UndeclaredAtom(String),

    #[error("duplicate signal `{0}`")]
    DuplicateSignal(String),

    #[error("operation requires a system-player problem")]
    NotSystemPlayer,

    #[error("HOA error at line {line}: {msg}")]
    Hoa { line: usize, msg: String },

    #[error("translator failed: {0}")]
    Translator(String),

    #[error("encoding error: {0}")]
    Encoding(String),

    #[error("QBF error: {0}")]
    Qbf(String),

    #[error("solver error: {0}")]
    Solver(String),

    #[error("unparseable solver output: {0}")]
    UnparseableOutput(String),

    #[error("solver timed out")]
    Timeout,

    #[error("incomplete model: no value for {0}")]
    IncompleteModel(String),

    #[error("signal mismatch: {0}")]
    SignalMismatch(String),

    #[error("cancelled")]
    Cancelled,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
