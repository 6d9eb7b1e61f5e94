use thiserror::Error;

use crate::autodiff::AdError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Ad(#[from] AdError),
    #[error("qubit count {0} outside supported range 2..=12")]
    QubitCount(usize),
    #[error("circuit topologies need at least 2 qubits, got {0}")]
    TooFewQubits(usize),
    #[error("qubit index {index} out of range for {dq} qubits")]
    QubitIndex { index: usize, dq: usize },
    #[error("control and target are both qubit {0}")]
    SameControlTarget(usize),
    #[error("{what}: expected {expected}, got {got}")]
    Shape {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("invalid problem: {0}")]
    Problem(String),
    #[error("non-finite {0}")]
    NonFinite(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error("grid mismatch: {0}")]
    Grid(String),
    #[error("CFL number {0} exceeds 1")]
    Cfl(f64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn shape(what: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Shape {
            what,
            expected,
            got,
        })
    }
}
