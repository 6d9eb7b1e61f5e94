//! Independent reference solutions for the benchmark problems and the error
//! metrics used to score predictions against them.

mod adr;
mod bl;
mod grid;
mod metrics;
mod pressure;

pub use adr::{adr_upwind_2d, erfc, ogata_banks};
pub use bl::{bl_upwind, cell_centres, upwind_l1_error, BlFan};
pub use grid::{linspace, write_fields, GridField};
pub use metrics::{compute_errors, write_reports, ErrorReport, ReportRow, REL_FLOOR};
pub use pressure::{pressure_analytic, pressure_fd};

use crate::error::{Error, Result};
use crate::network::HybridModel;
use crate::physics::PdeProblem;

/// Points per side of the evaluation grid for the 2-D problems.
pub const EVAL_POINTS: usize = 101;
/// Points along `x` for the 1-D transient problem.
pub const BL_EVAL_POINTS: usize = 201;
pub const BL_TIMES: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
pub const ADR_TIMES: [f64; 2] = [0.2, 0.6];
pub const BL_FD_CELLS: usize = 4000;
pub const FD_CFL: f64 = 0.9;

/// Default evaluation times for a problem; empty for steady problems.
pub fn default_times(problem: &PdeProblem) -> Vec<f64> {
    match problem {
        PdeProblem::HeterogeneousPressure(_) => Vec::new(),
        PdeProblem::BuckleyLeverett(_) => BL_TIMES.to_vec(),
        PdeProblem::AdvectionDispersionAdsorption(_) => ADR_TIMES.to_vec(),
    }
}

/// Reference fields on the evaluation grids: the analytic pressure, the
/// upwind waterflood solution resampled to the evaluation points, and the
/// 2-D explicit concentration solution.
pub fn reference_fields(problem: &PdeProblem, times: &[f64]) -> Result<Vec<GridField>> {
    problem.validate()?;
    let axis = linspace(0.0, 1.0, EVAL_POINTS);
    match problem {
        PdeProblem::HeterogeneousPressure(p) => Ok(vec![GridField::from_fn(
            axis.clone(),
            Some(axis),
            None,
            |q| pressure_analytic(p, q[1]),
        )?]),
        PdeProblem::BuckleyLeverett(b) => {
            check_times(times)?;
            bl_upwind(b, BL_FD_CELLS, times, FD_CFL)?
                .into_iter()
                .map(|f| f.resample_x(linspace(0.0, 1.0, BL_EVAL_POINTS)))
                .collect()
        }
        PdeProblem::AdvectionDispersionAdsorption(a) => {
            check_times(times)?;
            adr_upwind_2d(a, EVAL_POINTS, times, FD_CFL)
        }
    }
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::Config("transient problems need at least one time".into()));
    }
    if times.iter().any(|t| !(0.0..=1.0).contains(t)) {
        return Err(Error::Config("times must lie in [0, 1]".into()));
    }
    Ok(())
}

/// Model prediction in physical units on the grid of `template`.
pub fn predict_on(model: &HybridModel<f64>, template: &GridField) -> Result<GridField> {
    GridField::try_from_fn(
        template.x().to_vec(),
        template.y().map(<[f64]>::to_vec),
        template.t(),
        |p| model.predict_physical(p),
    )
}
