use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("wire dimension {dim} at position {wire} is smaller than 2")]
    InvalidDimension { wire: usize, dim: usize },

    #[error("digit {digit} on wire {wire} is out of range for dimension {dim}")]
    DigitOutOfRange { wire: usize, digit: usize, dim: usize },

    #[error("basis index {index} out of range for total dimension {total}")]
    IndexOutOfRange { index: usize, total: usize },

    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("wire {0} is listed more than once")]
    RepeatedWire(usize),

    #[error("wire {wire} does not exist in a register of {wires} wires")]
    WireOutOfRange { wire: usize, wires: usize },

    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("invalid gate parameters: {0}")]
    InvalidGate(String),

    #[error("mode {mode} out of range for {modes} modes")]
    ModeOutOfRange { mode: usize, modes: usize },

    #[error("modes must be distinct, got {0:?}")]
    RepeatedMode(Vec<usize>),

    #[error("photon number mismatch: input has {input}, output has {output}")]
    PhotonNumberMismatch { input: usize, output: usize },

    #[error("element `{0}` is not linear and has no single-photon transfer matrix")]
    NonLinearElement(String),

    #[error("state leaves the logical subspace (leaked norm^2 {0:.3e})")]
    Leakage(f64),

    #[error("invalid optical parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("optimization did not converge: {0}")]
    Solver(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
