use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::physics::{CollocationPlan, LossWeights};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainConfig {
    pub lr0: f64,
    /// Points drawn per loss category in each optimizer step.
    pub batch_size: usize,
    pub max_epochs: usize,
    pub clip_norm: f64,
    pub patience: usize,
    pub decay_factor: f64,
    pub min_lr: f64,
    pub seed: u64,
    /// Every `loss_log_stride`-th epoch is kept in the history, plus the
    /// first and last.
    pub loss_log_stride: usize,
    pub weights: LossWeights,
    pub plan: CollocationPlan,
    /// Draw a fresh collocation pool every epoch instead of cycling a fixed one.
    pub resample: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            lr0: 0.005,
            batch_size: 64,
            max_epochs: 20000,
            clip_norm: 1.0,
            patience: 1000,
            decay_factor: 0.9,
            min_lr: 1e-6,
            seed: 0,
            loss_log_stride: 1,
            weights: LossWeights::default(),
            plan: CollocationPlan::default(),
            resample: false,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.lr0 > 0.0 && self.lr0.is_finite()) {
            return bad(format!("lr0 must be positive, got {}", self.lr0));
        }
        if !(self.decay_factor > 0.0 && self.decay_factor < 1.0) {
            return bad(format!("decay_factor must lie in (0, 1), got {}", self.decay_factor));
        }
        if !(self.min_lr > 0.0) {
            return bad(format!("min_lr must be positive, got {}", self.min_lr));
        }
        if self.patience == 0 {
            return bad("patience must be at least 1".into());
        }
        if self.batch_size == 0 {
            return bad("batch_size must be at least 1".into());
        }
        if !(self.clip_norm > 0.0) {
            return bad(format!("clip_norm must be positive, got {}", self.clip_norm));
        }
        if self.loss_log_stride == 0 {
            return bad("loss_log_stride must be at least 1".into());
        }
        let w = self.weights;
        if [w.pde, w.bc, w.ic].iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
            return bad("loss weights must be finite and non-negative".into());
        }
        if self.plan.interior == 0 || self.plan.per_segment == 0 || self.plan.initial == 0 {
            return bad("collocation counts must be positive".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        TrainConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_bad_decay() {
        for f in [0.0, 1.0, 1.5] {
            let c = TrainConfig {
                decay_factor: f,
                ..Default::default()
            };
            assert!(c.validate().is_err());
        }
    }
}
