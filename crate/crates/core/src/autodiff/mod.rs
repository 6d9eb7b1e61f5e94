//! Nested automatic differentiation.
//!
//! Two layers compose here. [`Jet`] is forward mode: value, first partials
//! and pure second partials along a fixed set of input directions. [`Tape`]
//! is reverse mode over jet-valued nodes, so a quantity built from input
//! derivatives (a PDE residual) differentiates with respect to every
//! registered parameter in one sweep.
//!
//! Model code is written once against [`Scalar`] and runs on plain floats,
//! on tape-free jets, or on tape variables.

mod jet;
mod scalar;
mod tape;

pub use jet::{Jet, UnaryFn};
pub use scalar::{InputDerivative, Real, Scalar};
pub use tape::{Tape, Var};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AdError {
    #[error("{op} evaluated outside its domain at {value}")]
    Domain { op: &'static str, value: f64 },
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("input derivatives of order {0} are not supported (max 2)")]
    UnsupportedOrder(u8),
    #[error("input direction {dir} out of range for {n} directions")]
    Direction { dir: usize, n: usize },
    #[error("operands recorded on different tapes")]
    ForeignTape,
    #[error("node {0} is not a registered variable")]
    NotASlot(usize),
    #[error("expected {expected} entries, got {got}")]
    Shape { expected: usize, got: usize },
}
