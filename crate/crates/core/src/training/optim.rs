use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rescales `grads` in place so their joint Euclidean norm is at most
/// `max_norm`. Returns the norm before clipping.
pub fn clip_global_norm(grads: &mut [f64], max_norm: f64) -> Result<f64> {
    if let Some(i) = grads.iter().position(|g| !g.is_finite()) {
        return Err(Error::NonFinite(format!("gradient component {i}")));
    }
    let norm = grads.iter().map(|g| g * g).sum::<f64>().sqrt();
    if norm > max_norm {
        let s = max_norm / norm;
        for g in grads.iter_mut() {
            *g *= s;
        }
    }
    Ok(norm)
}

/// Adam with bias-corrected moments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Adam {
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub t: u64,
}

impl Adam {
    pub fn new(n: usize) -> Self {
        Self {
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            m: vec![0.0; n],
            v: vec![0.0; n],
            t: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }

    /// Applies one update. On a non-finite result neither `params` nor the
    /// optimizer state change.
    pub fn step(&mut self, params: &mut [f64], grads: &[f64], lr: f64) -> Result<()> {
        let n = self.m.len();
        crate::error::shape("optimizer parameters", n, params.len())?;
        crate::error::shape("optimizer gradients", n, grads.len())?;
        let t = self.t + 1;
        let c1 = 1.0 - self.beta1.powi(t as i32);
        let c2 = 1.0 - self.beta2.powi(t as i32);
        let mut m = self.m.clone();
        let mut v = self.v.clone();
        let mut next = params.to_vec();
        for i in 0..n {
            let g = grads[i];
            m[i] = self.beta1 * m[i] + (1.0 - self.beta1) * g;
            v[i] = self.beta2 * v[i] + (1.0 - self.beta2) * g * g;
            let mh = m[i] / c1;
            let vh = v[i] / c2;
            next[i] -= lr * mh / (vh.sqrt() + self.eps);
            if !next[i].is_finite() {
                return Err(Error::NonFinite(format!("Adam update of parameter {i}")));
            }
        }
        self.m = m;
        self.v = v;
        self.t = t;
        params.copy_from_slice(&next);
        Ok(())
    }
}

/// Multiplies the learning rate by `factor` after `patience` consecutive
/// steps without strict improvement of the monitored loss.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlateauScheduler {
    pub lr: f64,
    pub factor: f64,
    pub patience: usize,
    pub min_lr: f64,
    pub best: Option<f64>,
    pub bad_steps: usize,
}

impl PlateauScheduler {
    pub fn new(lr: f64, factor: f64, patience: usize, min_lr: f64) -> Self {
        Self {
            lr,
            factor,
            patience,
            min_lr,
            best: None,
            bad_steps: 0,
        }
    }

    pub fn step(&mut self, loss: f64) -> f64 {
        if self.best.is_none_or(|b| loss < b) {
            self.best = Some(loss);
            self.bad_steps = 0;
        } else {
            self.bad_steps += 1;
            if self.bad_steps >= self.patience {
                self.lr = (self.lr * self.factor).max(self.min_lr);
                self.bad_steps = 0;
            }
        }
        self.lr
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clip_below_threshold_is_identity() {
        let mut g = vec![0.3, 0.4];
        assert_eq!(clip_global_norm(&mut g, 1.0).unwrap(), 0.5);
        assert_eq!(g, vec![0.3, 0.4]);
    }

    #[test]
    fn clip_scales_down() {
        let mut g = vec![2.0, 0.0];
        clip_global_norm(&mut g, 1.0).unwrap();
        assert_eq!(g, vec![1.0, 0.0]);
    }

    #[test]
    fn clip_rejects_nan() {
        assert!(clip_global_norm(&mut [1.0, f64::NAN], 1.0).is_err());
    }

    #[test]
    fn adam_first_step() {
        let mut a = Adam::new(1);
        let mut p = vec![0.0];
        a.step(&mut p, &[1.0], 0.005).unwrap();
        // m̂ = v̂ = 1, so Δ = -lr / (1 + ε).
        assert!((p[0] + 0.005 / (1.0 + 1e-8)).abs() < 1e-18);
        assert_eq!(a.t, 1);
    }

    #[test]
    fn adam_zero_gradient() {
        let mut a = Adam::new(3);
        let mut p = vec![1.0, -2.0, 3.0];
        a.step(&mut p, &[0.0; 3], 0.005).unwrap();
        assert_eq!(p, vec![1.0, -2.0, 3.0]);
    }

    #[test]
    fn adam_non_finite_leaves_state() {
        let mut a = Adam::new(1);
        let mut p = vec![1.0];
        assert!(a.step(&mut p, &[f64::INFINITY], 0.1).is_err());
        assert_eq!(p, vec![1.0]);
        assert_eq!(a, Adam::new(1));
    }

    #[test]
    fn plateau_decays_after_patience() {
        let mut s = PlateauScheduler::new(0.005, 0.9, 1000, 1e-6);
        s.step(1.0);
        for _ in 0..999 {
            assert_eq!(s.step(1.0), 0.005);
        }
        assert!((s.step(1.0) - 0.0045).abs() < 1e-15);
    }

    #[test]
    fn plateau_holds_with_improvement() {
        let mut s = PlateauScheduler::new(0.005, 0.9, 1000, 1e-6);
        for i in 0..20000 {
            assert_eq!(s.step(1.0 / (i + 1) as f64), 0.005);
        }
    }

    #[test]
    fn plateau_floor() {
        let mut s = PlateauScheduler::new(1e-6, 0.9, 1, 1e-6);
        s.step(1.0);
        for _ in 0..10 {
            assert_eq!(s.step(2.0), 1e-6);
        }
    }
}
