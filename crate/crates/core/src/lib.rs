pub mod autodiff;
pub mod error;
pub mod io;
pub mod network;
pub mod parallel;
pub mod physics;
pub mod quantum;
pub mod reference;
pub mod training;

pub use error::{Error, Result};

/// Hybrid model in double precision.
pub type Model = network::HybridModel<f64>;
/// Hybrid model in single precision.
pub type ModelF32 = network::HybridModel<f32>;
/// Statevector over plain doubles.
pub type State = quantum::StateVector<f64>;

/// Converts an `f64` literal into the working precision.
#[inline]
pub(crate) fn cst<T: num_traits::Float>(x: f64) -> T {
    num_traits::cast(x).expect("f64 constant representable in working precision")
}
