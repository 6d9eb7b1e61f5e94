use rand::Rng;
use serde::{Deserialize, Serialize};

use super::problem::{ConditionKind, PdeProblem};
use crate::error::{Error, Result};

/// Point in the normalized domain; unused trailing coordinates are zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollocationPoint {
    pub x: [f64; 3],
    /// Target value in network units (Dirichlet and initial points).
    pub target: f64,
    /// Normal axis (zero-flux points).
    pub axis: usize,
}

impl CollocationPoint {
    pub fn interior(x: [f64; 3]) -> Self {
        Self {
            x,
            target: 0.0,
            axis: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollocationPlan {
    pub interior: usize,
    pub per_segment: usize,
    pub initial: usize,
}

impl Default for CollocationPlan {
    fn default() -> Self {
        Self {
            interior: 2000,
            per_segment: 200,
            initial: 400,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CollocationSet {
    pub interior: Vec<CollocationPoint>,
    pub dirichlet: Vec<CollocationPoint>,
    pub neumann: Vec<CollocationPoint>,
    pub initial: Vec<CollocationPoint>,
}

impl CollocationSet {
    pub fn len(&self) -> usize {
        self.interior.len() + self.dirichlet.len() + self.neumann.len() + self.initial.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn uniform_point<R: Rng>(dim: usize, rng: &mut R) -> [f64; 3] {
    let mut x = [0.0; 3];
    for v in x.iter_mut().take(dim) {
        *v = rng.gen::<f64>();
    }
    x
}

/// Uniform interior, boundary-segment and initial points.
pub fn sample_points<R: Rng>(
    problem: &PdeProblem,
    plan: &CollocationPlan,
    rng: &mut R,
) -> Result<CollocationSet> {
    if plan.interior == 0 || plan.per_segment == 0 {
        return Err(Error::Config("collocation counts must be positive".into()));
    }
    let time = problem.time_axis();
    if time.is_some() && plan.initial == 0 {
        return Err(Error::Config("transient problems need initial points".into()));
    }
    let dim = problem.dim();
    let mut set = CollocationSet {
        interior: (0..plan.interior)
            .map(|_| CollocationPoint::interior(uniform_point(dim, rng)))
            .collect(),
        ..Default::default()
    };
    for bc in problem.boundary_conditions() {
        let s = bc.segment;
        for _ in 0..plan.per_segment {
            let mut x = uniform_point(dim, rng);
            x[s.axis] = s.at;
            if let (Some(from), Some(t)) = (s.time_from, time) {
                x[t] = from + (1.0 - from) * x[t];
            }
            match bc.kind {
                ConditionKind::Dirichlet(v) => set.dirichlet.push(CollocationPoint {
                    x,
                    target: v,
                    axis: s.axis,
                }),
                ConditionKind::NeumannZero => set.neumann.push(CollocationPoint {
                    x,
                    target: 0.0,
                    axis: s.axis,
                }),
            }
        }
    }
    if let (Some(t), Some(v)) = (time, problem.initial_value()) {
        for _ in 0..plan.initial {
            let mut x = uniform_point(dim, rng);
            x[t] = 0.0;
            set.initial.push(CollocationPoint {
                x,
                target: v,
                axis: t,
            });
        }
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::ProblemKind;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ex1_points_in_domain() {
        let p = PdeProblem::example(ProblemKind::Ex1);
        let plan = CollocationPlan {
            interior: 100,
            per_segment: 20,
            initial: 0,
        };
        let s = sample_points(&p, &plan, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(s.interior.len(), 100);
        assert!(s
            .interior
            .iter()
            .all(|q| (0.0..=1.0).contains(&q.x[0]) && (0.0..=1.0).contains(&q.x[1])));
        let bottom: Vec<_> = s.dirichlet.iter().filter(|q| q.target == 1.0).collect();
        assert_eq!(bottom.len(), 20);
        assert!(bottom.iter().all(|q| q.x[1] == 0.0));
        assert_eq!(s.neumann.len(), 40);
        assert!(s.initial.is_empty());
    }

    #[test]
    fn deterministic_and_gap_respected() {
        let p = PdeProblem::example(ProblemKind::Ex2);
        let plan = CollocationPlan::default();
        let a = sample_points(&p, &plan, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        let b = sample_points(&p, &plan, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        assert_eq!(a, b);
        assert!(a.dirichlet.iter().all(|q| q.x[0] == 0.0 && q.x[1] >= 0.01));
        assert!(a.initial.iter().all(|q| q.x[1] == 0.0 && q.target == 0.0));
        assert!(a.neumann.is_empty());
    }

    #[test]
    fn zero_counts_rejected() {
        let p = PdeProblem::example(ProblemKind::Ex3);
        let plan = CollocationPlan {
            interior: 0,
            ..Default::default()
        };
        assert!(sample_points(&p, &plan, &mut ChaCha8Rng::seed_from_u64(0)).is_err());
    }
}
