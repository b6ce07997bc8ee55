use thiserror::Error;

/// Errors raised while reading circuit text.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("empty circuit text")]
    Empty,
    #[error("line {line}: missing `qubits <n>` header")]
    MissingHeader { line: usize },
    #[error("line {line}: invalid qubit count `{text}`")]
    BadQubitCount { line: usize, text: String },
    #[error("line {line}: unknown gate `{name}`")]
    UnknownGate { line: usize, name: String },
    #[error("line {line}: gate `{name}` expects {expected} operand(s), got {found}")]
    Arity {
        line: usize,
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: gate `{name}` expects {expected} parameter(s), got {found}")]
    ParamCount {
        line: usize,
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: duplicate operand {qubit}")]
    DuplicateOperand { line: usize, qubit: usize },
    #[error("line {line}: qubit {qubit} out of range for {num_qubits} qubits")]
    QubitOutOfRange {
        line: usize,
        qubit: usize,
        num_qubits: usize,
    },
    #[error("line {line}: malformed token `{text}`")]
    Malformed { line: usize, text: String },
}

/// Errors raised by the cutting and reconstruction pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("unsupported size n={n} for benchmark `{kind}`: {reason}")]
    UnsupportedSize {
        kind: String,
        n: usize,
        reason: String,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("infeasible cut: {0}")]
    Infeasible(String),
    #[error("unassigned vertex {0} in partition")]
    UnassignedVertex(usize),
    #[error("simulator cap exceeded: {width} qubits > cap {cap}")]
    SimulatorCap { width: usize, cap: usize },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("tensor network mismatch: {0}")]
    NetworkMismatch(String),
    #[error("memory cap of {cap} elements cannot be met: {reason}")]
    MemoryCap { cap: usize, reason: String },
    #[error("invalid selection: {0}")]
    Selection(String),
    #[error("tensor file: {0}")]
    TensorFile(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
