use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("index arity mismatch for `{symbol}`: expected {expected}, found {found}")]
    IndexArity { symbol: String, expected: usize, found: usize },
    #[error("jet order {order} exceeds cap {cap}")]
    JetCap { order: u32, cap: u8 },
    #[error("operands belong to different symbol registries")]
    RegistryMismatch,
    #[error("{0}")]
    Validation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
