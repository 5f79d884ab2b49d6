use thiserror::Error;

use crate::symbol::TapeSymbol;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolError {
    #[error("bad symbol token `{0}`")]
    BadToken(String),
    #[error("bad direction `{0}` (expected L, S or R)")]
    BadDirection(char),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("letter `{0}` is not in the alphabet")]
    LetterNotInAlphabet(char),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operator is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),
    #[error("invalid measurement: {0}")]
    InvalidMeasurement(String),
    #[error("result {0} has zero probability")]
    ZeroProbability(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BuildError {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("symbol `{0}` is not valid for this machine")]
    UnknownSymbol(String),
    #[error("duplicate transition for ({state}, {symbol})")]
    DuplicateTransition { state: String, symbol: String },
    #[error("move vector `{code}` has {found} entries, machine has {tapes} tapes")]
    Arity { code: String, found: usize, tapes: usize },
    #[error("unknown quantum operation `{0}`")]
    UnknownOperation(String),
    #[error("theta/delta mismatch: {0}")]
    ThetaDeltaMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StepError {
    #[error("no transition defined for ({state}, {symbol})")]
    UndefinedTransition { state: String, symbol: TapeSymbol },
    #[error("head of tape {} would leave the tape at position {position}", tape + 1)]
    HeadOutOfRange { tape: usize, position: isize },
    #[error("transition from ({state}, {symbol}) moves more than one head")]
    MoveRule { state: String, symbol: TapeSymbol },
    #[error("state `{0}` is halting")]
    Halted(String),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RunError {
    #[error("branch tree exceeded {nodes} live nodes at depth {depth}")]
    BranchExplosion { nodes: usize, depth: u64 },
    #[error(transparent)]
    Step(#[from] StepError),
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("invalid run option: {0}")]
    Options(String),
}
