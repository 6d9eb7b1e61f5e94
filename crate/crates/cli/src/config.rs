//! Flat `key = value` run configuration.

use std::path::{Path, PathBuf};

use qcpinn::network::Architecture;
use qcpinn::physics::{CollocationPlan, LossWeights, PdeProblem, ProblemKind};
use qcpinn::quantum::{CircuitSpec, Topology};
use qcpinn::training::TrainConfig;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Every key is optional; omitted keys take the benchmark defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemKind,
    pub topology: Topology,
    /// Defaults to 2, 5 and 6 qubits for ex1, ex2 and ex3.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qubits: Option<usize>,
    pub layers: usize,
    pub hidden_width: usize,

    pub lr0: f64,
    pub batch_size: usize,
    pub max_epochs: usize,
    pub clip_norm: f64,
    pub patience: usize,
    pub decay_factor: f64,
    pub min_lr: f64,
    pub loss_log_stride: usize,
    pub resample: bool,
    pub weight_pde: f64,
    pub weight_bc: f64,
    pub weight_ic: f64,

    pub interior_points: usize,
    /// Points per boundary segment.
    pub boundary_points: usize,
    pub initial_points: usize,

    pub out_dir: PathBuf,
    pub seed: u64,

    #[serde(flatten)]
    pub coefficients: Coefficients,
}

/// Optional problem coefficient overrides. Each applies to one problem only.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ly: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_bottom: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_top: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub velocity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub viscosity_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_inject: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_initial: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub swc: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nw: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub no: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kd: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dispersion: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vx: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_inlet: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_initial: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let t = TrainConfig::default();
        let plan = CollocationPlan::default();
        Self {
            problem: ProblemKind::Ex1,
            topology: Topology::Alternate,
            qubits: None,
            layers: 1,
            hidden_width: 50,
            lr0: t.lr0,
            batch_size: t.batch_size,
            max_epochs: t.max_epochs,
            clip_norm: t.clip_norm,
            patience: t.patience,
            decay_factor: t.decay_factor,
            min_lr: t.min_lr,
            loss_log_stride: t.loss_log_stride,
            resample: t.resample,
            weight_pde: t.weights.pde,
            weight_bc: t.weights.bc,
            weight_ic: t.weights.ic,
            interior_points: plan.interior,
            boundary_points: plan.per_segment,
            initial_points: plan.initial,
            out_dir: PathBuf::from("out"),
            seed: t.seed,
            coefficients: Coefficients::default(),
        }
    }
}

/// Parses an override value as a TOML value, falling back to a bare string
/// so `topology=cascade` needs no quotes.
fn parse_value(raw: &str) -> toml::Value {
    toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

impl RunConfig {
    /// Reads `path` (if any), applies `key=value` overrides in order and
    /// validates the result.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let mut table = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::io(format!("reading {}: {e}", p.display())))?;
                toml::from_str::<toml::Table>(&text)
                    .map_err(|e| CliError::config(format!("{}: {e}", p.display())))?
            }
            None => toml::Table::new(),
        };
        for o in overrides {
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| CliError::config(format!("override '{o}' is not key=value")))?;
            table.insert(k.trim().to_string(), parse_value(v.trim()));
        }
        Self::from_table(table)
    }

    pub fn from_table(table: toml::Table) -> Result<Self> {
        let cfg: RunConfig = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| CliError::config(e.message().trim().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let table = toml::from_str::<toml::Table>(text).map_err(|e| CliError::config(e.to_string()))?;
        Self::from_table(table)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| CliError::config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.circuit()?;
        if self.hidden_width == 0 {
            return Err(CliError::config("hidden_width must be at least 1"));
        }
        self.train_config().validate()?;
        self.pde()?;
        Ok(())
    }

    pub fn qubits(&self) -> usize {
        self.qubits.unwrap_or(self.problem.default_qubits())
    }

    pub fn circuit(&self) -> Result<CircuitSpec> {
        Ok(CircuitSpec::new(self.topology, self.qubits(), self.layers)?)
    }

    pub fn architecture(&self) -> Result<Architecture> {
        Ok(Architecture {
            inputs: self.pde()?.dim(),
            hidden: self.hidden_width,
            circuit: self.circuit()?,
        })
    }

    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            lr0: self.lr0,
            batch_size: self.batch_size,
            max_epochs: self.max_epochs,
            clip_norm: self.clip_norm,
            patience: self.patience,
            decay_factor: self.decay_factor,
            min_lr: self.min_lr,
            seed: self.seed,
            loss_log_stride: self.loss_log_stride,
            weights: LossWeights {
                pde: self.weight_pde,
                bc: self.weight_bc,
                ic: self.weight_ic,
            },
            plan: CollocationPlan {
                interior: self.interior_points,
                per_segment: self.boundary_points,
                initial: self.initial_points,
            },
            resample: self.resample,
        }
    }

    /// The benchmark problem with coefficient overrides applied.
    pub fn pde(&self) -> Result<PdeProblem> {
        let c = &self.coefficients;
        let mut p = PdeProblem::example(self.problem);
        let mut used: Vec<&str> = Vec::new();
        let mut set = |slot: &mut f64, v: Option<f64>, name: &'static str| {
            if let Some(v) = v {
                *slot = v;
                used.push(name);
            }
        };
        match &mut p {
            PdeProblem::HeterogeneousPressure(q) => {
                set(&mut q.k0, c.k0, "k0");
                set(&mut q.ly, c.ly, "ly");
                set(&mut q.p_bottom, c.p_bottom, "p_bottom");
                set(&mut q.p_top, c.p_top, "p_top");
            }
            PdeProblem::BuckleyLeverett(q) => {
                set(&mut q.v, c.velocity, "velocity");
                set(&mut q.m, c.viscosity_ratio, "viscosity_ratio");
                set(&mut q.s_inject, c.s_inject, "s_inject");
                set(&mut q.s_initial, c.s_initial, "s_initial");
                set(&mut q.corey.swc, c.swc, "swc");
                set(&mut q.corey.sor, c.sor, "sor");
                set(&mut q.corey.nw, c.nw, "nw");
                set(&mut q.corey.no, c.no, "no");
            }
            PdeProblem::AdvectionDispersionAdsorption(q) => {
                set(&mut q.phi, c.phi, "phi");
                set(&mut q.rho_b, c.rho_b, "rho_b");
                set(&mut q.kd, c.kd, "kd");
                set(&mut q.d, c.dispersion, "dispersion");
                set(&mut q.vx, c.vx, "vx");
                set(&mut q.vy, c.vy, "vy");
                set(&mut q.c_inlet, c.c_inlet, "c_inlet");
                set(&mut q.c_initial, c.c_initial, "c_initial");
            }
        }
        let given = toml::Value::try_from(c)
            .ok()
            .and_then(|v| v.as_table().map(|t| t.keys().cloned().collect::<Vec<_>>()))
            .unwrap_or_default();
        if let Some(k) = given.iter().find(|k| !used.contains(&k.as_str())) {
            return Err(CliError::config(format!(
                "key '{k}' does not apply to problem {}",
                self.problem
            )));
        }
        p.validate()?;
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_the_default() {
        assert_eq!(RunConfig::from_toml("").unwrap(), RunConfig::default());
    }

    #[test]
    fn defaults_per_problem() {
        for (kind, dq) in [(ProblemKind::Ex1, 2), (ProblemKind::Ex2, 5), (ProblemKind::Ex3, 6)] {
            let c = RunConfig {
                problem: kind,
                ..Default::default()
            };
            assert_eq!(c.qubits(), dq);
            assert_eq!(c.layers, 1);
            assert_eq!(c.hidden_width, 50);
            let t = c.train_config();
            assert_eq!((t.lr0, t.batch_size, t.max_epochs), (0.005, 64, 20000));
            assert_eq!((t.patience, t.decay_factor, t.min_lr, t.clip_norm), (1000, 0.9, 1e-6, 1.0));
            assert_eq!(c.pde().unwrap(), PdeProblem::example(kind));
        }
    }

    #[test]
    fn round_trip() {
        let text = "problem = \"ex3\"\ntopology = \"cascade\"\nqubits = 4\nmax_epochs = 10\n\
                    seed = 7\nvx = 0.25\nout_dir = \"runs/a\"\nresample = true\n";
        let a = RunConfig::from_toml(text).unwrap();
        let b = RunConfig::from_toml(&a.to_toml().unwrap()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_toml().unwrap(), b.to_toml().unwrap());
        assert_eq!(a.coefficients.vx, Some(0.25));
        let d = RunConfig::default();
        assert_eq!(RunConfig::from_toml(&d.to_toml().unwrap()).unwrap(), d);
    }

    #[test]
    fn unknown_keys_and_bad_values() {
        assert!(RunConfig::from_toml("learning_rate = 0.1").is_err());
        let e = RunConfig::from_toml("topology = \"ring\"").unwrap_err();
        assert!(e.message.contains("cascade") && e.message.contains("alternate"), "{e}");
        assert!(RunConfig::from_toml("decay_factor = 1.5").is_err());
        assert!(RunConfig::from_toml("qubits = 1").is_err());
        assert!(RunConfig::from_toml("problem = \"ex2\"\nk0 = 1.0").is_err());
    }

    #[test]
    fn overrides_apply_in_order() {
        let c = RunConfig::load(
            None,
            &[
                "problem=ex2".into(),
                "topology=crossmesh".into(),
                "max_epochs=3".into(),
                "max_epochs=4".into(),
                "viscosity_ratio=3".into(),
            ],
        )
        .unwrap();
        assert_eq!(c.problem, ProblemKind::Ex2);
        assert_eq!(c.topology, Topology::CrossMesh);
        assert_eq!(c.max_epochs, 4);
        let PdeProblem::BuckleyLeverett(b) = c.pde().unwrap() else { panic!() };
        assert_eq!(b.m, 3.0);
        assert!(RunConfig::load(None, &["max_epochs".into()]).is_err());
    }
}
