use std::path::Path;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::TrainConfig;
use super::optim::{Adam, PlateauScheduler};
use super::trainer::Batcher;
use crate::error::{Error, Result};
use crate::network::{Architecture, HybridModel, InputNormalization, OutputScaling, ParamLayout};
use crate::physics::{CollocationSet, PdeProblem};
use crate::quantum::CircuitSpec;

pub const CHECKPOINT_FORMAT: &str = "qcpinn-checkpoint";
pub const CHECKPOINT_VERSION: u32 = 1;

/// Complete training state as a JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checkpoint {
    pub format: String,
    pub version: u32,
    pub problem: PdeProblem,
    pub config: TrainConfig,
    pub arch: Architecture,
    pub input_map: InputNormalization,
    pub output_map: OutputScaling,
    pub params: Vec<f64>,
    pub adam: Adam,
    pub scheduler: PlateauScheduler,
    pub rng: ChaCha8Rng,
    pub batcher: Batcher,
    /// Present only when the pool is resampled and so cannot be rebuilt from
    /// the seed.
    pub pool: Option<CollocationSet>,
    pub epoch: usize,
}

impl Checkpoint {
    pub fn validate(&self) -> Result<()> {
        if self.format != CHECKPOINT_FORMAT {
            return Err(Error::Checkpoint(format!("unknown format {:?}", self.format)));
        }
        if self.version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!(
                "version {} is not supported (expected {CHECKPOINT_VERSION})",
                self.version
            )));
        }
        let c = self.arch.circuit;
        CircuitSpec::new(c.topology, c.qubits, c.layers)
            .map_err(|e| Error::Checkpoint(format!("circuit: {e}")))?;
        self.problem.validate()?;
        self.config.validate()?;
        if self.arch.inputs != self.problem.dim() {
            return Err(Error::Checkpoint(format!(
                "model takes {} inputs but the problem has {} coordinates",
                self.arch.inputs,
                self.problem.dim()
            )));
        }
        let n = ParamLayout::new(&self.arch).len();
        for (what, got) in [
            ("parameters", self.params.len()),
            ("first moments", self.adam.m.len()),
            ("second moments", self.adam.v.len()),
        ] {
            if got != n {
                return Err(Error::Checkpoint(format!(
                    "{got} {what} for an architecture with {n} parameters"
                )));
            }
        }
        if self.params.iter().any(|p| !p.is_finite()) {
            return Err(Error::Checkpoint("non-finite parameter".into()));
        }
        Ok(())
    }

    /// Fails unless the stored circuit is `spec`.
    pub fn expect_circuit(&self, spec: &CircuitSpec) -> Result<()> {
        if self.arch.circuit != *spec {
            let c = self.arch.circuit;
            return Err(Error::Checkpoint(format!(
                "checkpoint holds a {} circuit with {} qubits and {} layers, expected {} with {} qubits and {} layers",
                c.topology, c.qubits, c.layers, spec.topology, spec.qubits, spec.layers
            )));
        }
        Ok(())
    }

    pub fn model(&self) -> Result<HybridModel<f64>> {
        HybridModel::from_params(
            self.arch,
            self.input_map.clone(),
            self.output_map,
            self.params.clone(),
        )
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Checkpoint(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let ck: Checkpoint =
            serde_json::from_str(text).map_err(|e| Error::Checkpoint(e.to_string()))?;
        ck.validate()?;
        Ok(ck)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        crate::io::write_atomic(path, self.to_json()?.as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
