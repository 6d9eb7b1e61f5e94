//! Benchmark problems, residual operators, collocation sampling and loss
//! assembly.

mod flow;
mod loss;
mod problem;
mod sampling;

pub use flow::Corey;
pub use loss::{loss_and_gradient, total_loss, Field, LossBreakdown, LossWeights, GRADIENT_CHUNK};
pub use problem::{
    AdrParams, BoundaryCondition, BuckleyLeverettParams, ConditionKind, PdeProblem, PressureParams,
    ProblemKind, Segment, INLET_TIME_GAP,
};
pub use sampling::{sample_points, CollocationPlan, CollocationPoint, CollocationSet};
