use serde::{Deserialize, Serialize};

use super::problem::PdeProblem;
use super::sampling::{CollocationPoint, CollocationSet};
use crate::autodiff::{Jet, Scalar, Tape, Var};
use crate::error::{Error, Result};
use crate::network::HybridModel;
use crate::parallel::{map_chunks, map_chunks_with};

/// Points per recording tape in gradient evaluation.
pub const GRADIENT_CHUNK: usize = 8;
const VALUE_CHUNK: usize = 64;

/// A scalar field over normalized coordinates, evaluable on any scalar.
pub trait Field: Sync {
    fn eval<S: Scalar<Prim = f64>>(&self, x: &[S]) -> Result<S>;
}

impl Field for HybridModel<f64> {
    fn eval<S: Scalar<Prim = f64>>(&self, x: &[S]) -> Result<S> {
        let like = x.first().ok_or(Error::Shape {
            what: "model input",
            expected: self.arch.inputs,
            got: 0,
        })?;
        let p: Vec<S> = self.params.iter().map(|&v| like.lift(v)).collect();
        self.forward(&p, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossWeights {
    pub pde: f64,
    pub bc: f64,
    pub ic: f64,
}

impl Default for LossWeights {
    fn default() -> Self {
        Self {
            pde: 1.0,
            bc: 1.0,
            ic: 1.0,
        }
    }
}

/// Loss components; `bc` sums the Dirichlet and zero-flux mean squares.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossBreakdown {
    pub pde: f64,
    pub bc: f64,
    pub ic: f64,
    pub total: f64,
    pub weights: LossWeights,
}

impl LossBreakdown {
    pub fn new(pde: f64, bc: f64, ic: f64, weights: LossWeights) -> Result<Self> {
        let total = weights.pde * pde + weights.bc * bc + weights.ic * ic;
        if !total.is_finite() {
            return Err(Error::NonFinite(format!(
                "loss (pde {pde}, bc {bc}, ic {ic})"
            )));
        }
        Ok(Self {
            pde,
            bc,
            ic,
            total,
            weights,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Category {
    Interior,
    Dirichlet,
    Neumann,
    Initial,
}

fn check_set(problem: &PdeProblem, set: &CollocationSet) -> Result<()> {
    let need = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(Error::Problem(format!("{what} collocation set is empty")))
        }
    };
    need(!set.interior.is_empty(), "interior")?;
    need(!set.dirichlet.is_empty(), "Dirichlet boundary")?;
    if problem.has_neumann() {
        need(!set.neumann.is_empty(), "zero-flux boundary")?;
    }
    if problem.time_axis().is_some() {
        need(!set.initial.is_empty(), "initial")?;
    }
    Ok(())
}

fn mean(sum: f64, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

fn interior_term<F: Field, const N: usize>(
    field: &F,
    problem: &PdeProblem,
    pt: &CollocationPoint,
) -> Result<f64> {
    let xs: Vec<Jet<f64, N>> = (0..N).map(|i| Jet::input(pt.x[i], i)).collect();
    let u = field.eval(&xs)?;
    Ok(problem.residual(&u, &pt.x)?.v)
}

fn point_term<F: Field>(
    field: &F,
    problem: &PdeProblem,
    cat: Category,
    pt: &CollocationPoint,
) -> Result<f64> {
    let dim = problem.dim();
    match cat {
        Category::Interior => match dim {
            2 => interior_term::<F, 2>(field, problem, pt),
            3 => interior_term::<F, 3>(field, problem, pt),
            d => Err(Error::Problem(format!("unsupported dimension {d}"))),
        },
        Category::Neumann => {
            let xs: Vec<Jet<f64, 1>> = (0..dim)
                .map(|i| {
                    if i == pt.axis {
                        Jet::input(pt.x[i], 0)
                    } else {
                        Jet::constant(pt.x[i])
                    }
                })
                .collect();
            Ok(field.eval(&xs)?.d[0])
        }
        Category::Dirichlet | Category::Initial => Ok(field.eval(&pt.x[..dim])? - pt.target),
    }
}

fn sum_squares<F: Field>(
    field: &F,
    problem: &PdeProblem,
    cat: Category,
    points: &[CollocationPoint],
) -> Result<f64> {
    let parts = map_chunks(points, VALUE_CHUNK, |chunk| {
        chunk.iter().try_fold(0.0, |acc, pt| {
            let r = point_term(field, problem, cat, pt)?;
            Ok::<f64, Error>(acc + r * r)
        })
    });
    parts.into_iter().try_fold(0.0, |acc, p| Ok(acc + p?))
}

/// Weighted sum of the residual, boundary and initial mean squares.
pub fn total_loss<F: Field>(
    field: &F,
    problem: &PdeProblem,
    set: &CollocationSet,
    weights: LossWeights,
) -> Result<LossBreakdown> {
    check_set(problem, set)?;
    let ms = |cat, pts: &[CollocationPoint]| -> Result<f64> {
        Ok(mean(sum_squares(field, problem, cat, pts)?, pts.len()))
    };
    let pde = ms(Category::Interior, &set.interior)?;
    let bc = ms(Category::Dirichlet, &set.dirichlet)? + ms(Category::Neumann, &set.neumann)?;
    let ic = ms(Category::Initial, &set.initial)?;
    LossBreakdown::new(pde, bc, ic, weights)
}

fn chunk_gradient<const N: usize>(
    tape: &mut Tape<f64, N>,
    model: &HybridModel<f64>,
    problem: &PdeProblem,
    cat: Category,
    chunk: &[CollocationPoint],
    scale: f64,
) -> Result<(f64, Vec<f64>)> {
    let dim = problem.dim();
    tape.clear();
    let tape = &*tape;
    let p: Vec<Var<'_, f64, N>> = model.params.iter().map(|&v| tape.variable(v)).collect();
    let core = model.prepare(&p)?;
    let mut squares = Vec::with_capacity(chunk.len());
    for pt in chunk {
        let xs: Vec<Var<'_, f64, N>> = (0..dim)
            .map(|i| match cat {
                Category::Interior => tape.input(pt.x[i], i),
                Category::Neumann if i == pt.axis => tape.input(pt.x[i], 0),
                _ => tape.constant(pt.x[i]),
            })
            .collect();
        let u = model.forward_prepared(&p, &core, &xs)?;
        let term = match cat {
            Category::Interior => problem.residual(&u, &pt.x)?,
            Category::Neumann => u.derivative(0, 1)?,
            Category::Dirichlet | Category::Initial => u.offset(-pt.target),
        };
        squares.push(term * term);
    }
    let sum: f64 = squares.iter().map(|s| s.value()).sum();
    let out = tape.lincomb(&squares, &vec![scale; squares.len()]);
    Ok((sum, tape.gradient(out, &p)?))
}

fn gradient_parts<const N: usize>(
    model: &HybridModel<f64>,
    problem: &PdeProblem,
    cat: Category,
    points: &[CollocationPoint],
    scale: f64,
) -> Vec<Result<(f64, Vec<f64>)>> {
    map_chunks_with(
        points,
        GRADIENT_CHUNK,
        Tape::<f64, N>::new,
        |tape, chunk| chunk_gradient(tape, model, problem, cat, chunk, scale),
    )
}

fn category_gradient(
    model: &HybridModel<f64>,
    problem: &PdeProblem,
    cat: Category,
    points: &[CollocationPoint],
    weight: f64,
    grad: &mut [f64],
) -> Result<f64> {
    if points.is_empty() {
        return Ok(0.0);
    }
    let scale = weight / points.len() as f64;
    let parts = match (cat, problem.dim()) {
        (Category::Interior, 2) => gradient_parts::<2>(model, problem, cat, points, scale),
        (Category::Interior, 3) => gradient_parts::<3>(model, problem, cat, points, scale),
        (Category::Interior, d) => return Err(Error::Problem(format!("unsupported dimension {d}"))),
        (Category::Neumann, _) => gradient_parts::<1>(model, problem, cat, points, scale),
        _ => gradient_parts::<0>(model, problem, cat, points, scale),
    };
    let mut sum = 0.0;
    for part in parts {
        let (s, g) = part?;
        sum += s;
        for (a, b) in grad.iter_mut().zip(&g) {
            *a += b;
        }
    }
    Ok(sum / points.len() as f64)
}

/// Loss and its gradient with respect to every model parameter.
///
/// Chunk gradients are reduced in a fixed order, so results do not depend on
/// the number of worker threads.
pub fn loss_and_gradient(
    model: &HybridModel<f64>,
    problem: &PdeProblem,
    set: &CollocationSet,
    weights: LossWeights,
) -> Result<(LossBreakdown, Vec<f64>)> {
    check_set(problem, set)?;
    let mut grad = vec![0.0; model.parameter_count()];
    let pde = category_gradient(model, problem, Category::Interior, &set.interior, weights.pde, &mut grad)?;
    let bc = category_gradient(model, problem, Category::Dirichlet, &set.dirichlet, weights.bc, &mut grad)?
        + category_gradient(model, problem, Category::Neumann, &set.neumann, weights.bc, &mut grad)?;
    let ic = category_gradient(model, problem, Category::Initial, &set.initial, weights.ic, &mut grad)?;
    let loss = LossBreakdown::new(pde, bc, ic, weights)?;
    if let Some(i) = grad.iter().position(|g| !g.is_finite()) {
        return Err(Error::NonFinite(format!("gradient component {i}")));
    }
    Ok((loss, grad))
}
