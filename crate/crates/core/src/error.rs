use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("word has odd length {0}")]
    OddLength(usize),
    #[error("symbol {0} does not occur exactly twice")]
    SymbolCountNotTwo(usize),
    #[error("symbol {0} is outside 1..=n")]
    SymbolOutOfRange(usize),
    #[error("instance size must be at least 1")]
    EmptyInstance,
    #[error("position {pos} is outside 1..={max}")]
    PositionOutOfRange { pos: usize, max: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("colouring is not valid for this instance")]
    InvalidColoring,
    #[error("spin formula produced a non-integer value (twice the value was {0})")]
    NonIntegerCost(i64),
    #[error("{what} supports at most {max} variables, got {got}")]
    TooLarge { what: &'static str, max: usize, got: usize },
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(usize),
    #[error("malformed circuit: {0}")]
    MalformedCircuit(String),
    #[error("parameter vector has {got} entries, expected {expected}")]
    ParameterCount { expected: usize, got: usize },
    #[error("lightcone of pair ({0}, {1}) has {2} qubits, more than the supported 20")]
    LightconeTooLarge(usize, usize, usize),
    #[error("Hamiltonian has fewer than two active variables")]
    TooFewVariables,
    #[error("Hamiltonian has no couplings left")]
    NoCouplings,
    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("solver `{solver}` failed: {msg}")]
    Solver { solver: String, msg: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}
