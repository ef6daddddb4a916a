use alloc::string::String;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("unknown register `{0}`")]
    UnknownRegister(String),

    #[error("duplicate register `{0}`")]
    DuplicateRegister(String),

    #[error("capacity exceeded: {what} needs {needed}, limit is {limit}")]
    Capacity {
        what: &'static str,
        needed: usize,
        limit: usize,
    },

    #[error("kind mismatch: {0}")]
    KindMismatch(String),

    #[error("invalid cut: {0}")]
    InvalidCut(String),

    #[error("invalid encoding: {0}")]
    InvalidEncoding(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid protocol: {0}")]
    InvalidProtocol(String),

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("invalid parameters: {0}")]
    Parameters(String),

    #[error("length mismatch: expected {expected} bits, got {got}")]
    BitLength { expected: usize, got: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
