use thiserror::Error;

/// Unified error type for the workbench.
#[derive(Debug, Error)]
pub enum QeccError {
    #[error("size mismatch: operators act on {0} and {1} qubits")]
    SizeMismatch(usize, usize),

    #[error("unknown code `{0}`")]
    UnknownCode(String),

    #[error("catalog parse error at line {line}: {msg}")]
    CatalogParse { line: usize, msg: String },

    #[error("invalid noise parameters: {0}")]
    InvalidNoise(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("syndrome mismatch: reference does not match error syndrome")]
    SyndromeMismatch,

    #[error("code `{0}` has no gauge structure")]
    MissingGauge(String),

    #[error("table format error: {0}")]
    TableFormat(String),

    #[error("table version mismatch: found `{0}`, expected `qecc-table v1`")]
    TableVersion(String),

    #[error("table hash mismatch: table is for `{found_name}` ({found_hash:016x}), requested `{want_name}` ({want_hash:016x})")]
    TableHashMismatch {
        found_name: String,
        found_hash: u64,
        want_name: String,
        want_hash: u64,
    },

    #[error("no sign change of C - {target} for p in [{lo}, {hi}]")]
    NoBracket { target: f64, lo: f64, hi: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, QeccError>;
