use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid stabilizer shape: {0}")]
    InvalidShape(String),
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("not a cellular automaton code: {0}")]
    NotCellularAutomaton(String),
    #[error("brute-force enumeration over 2^{k} codewords exceeds the cap 2^{cap}; use the SAT method")]
    EnumerationCap { k: usize, cap: usize },
    #[error("SAT solver error: {0}")]
    Solver(String),
    #[error("invalid noise model: {0}")]
    InvalidModel(String),
    #[error("CNOT schedule conflict: {0}")]
    Schedule(String),
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("{0}")]
    OutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
