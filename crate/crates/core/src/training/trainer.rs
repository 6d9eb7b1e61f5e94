use std::io::Write;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::checkpoint::{Checkpoint, CHECKPOINT_FORMAT, CHECKPOINT_VERSION};
use super::config::TrainConfig;
use super::optim::{clip_global_norm, Adam, PlateauScheduler};
use crate::error::{Error, Result};
use crate::network::{Architecture, HybridModel, InputNormalization};
use crate::physics::{
    loss_and_gradient, sample_points, total_loss, CollocationPoint, CollocationSet, LossBreakdown,
    PdeProblem,
};

/// One history row; the loss is the minibatch loss before that epoch's update.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainRecord {
    pub epoch: usize,
    pub loss_pde: f64,
    pub loss_bc: f64,
    pub loss_ic: f64,
    pub total: f64,
    pub lr: f64,
}

pub const HISTORY_HEADER: [&str; 6] = ["epoch", "loss_total", "loss_pde", "loss_bc", "loss_ic", "lr"];

pub fn write_history<W: Write>(w: W, history: &[TrainRecord]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(HISTORY_HEADER)?;
    for r in history {
        out.write_record(&[
            r.epoch.to_string(),
            r.total.to_string(),
            r.loss_pde.to_string(),
            r.loss_bc.to_string(),
            r.loss_ic.to_string(),
            r.lr.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Shuffled cyclic index stream over one collocation category.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Cursor {
    order: Vec<u32>,
    pos: usize,
}

impl Cursor {
    fn take(&mut self, pool: usize, batch: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
        if pool <= batch {
            return (0..pool).collect();
        }
        let mut out = Vec::with_capacity(batch);
        while out.len() < batch {
            if self.pos >= self.order.len() || self.order.len() != pool {
                self.order = (0..pool as u32).collect();
                self.order.shuffle(rng);
                self.pos = 0;
            }
            out.push(self.order[self.pos] as usize);
            self.pos += 1;
        }
        out
    }
}

/// Minibatch cursors for the interior, Dirichlet, zero-flux and initial pools.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Batcher {
    pub cursors: [Cursor; 4],
}

impl Batcher {
    fn next(&mut self, set: &CollocationSet, batch: usize, rng: &mut ChaCha8Rng) -> CollocationSet {
        let pools = [&set.interior, &set.dirichlet, &set.neumann, &set.initial];
        let mut picked: Vec<Vec<CollocationPoint>> = Vec::with_capacity(4);
        for (cursor, pool) in self.cursors.iter_mut().zip(pools) {
            let idx = cursor.take(pool.len(), batch, rng);
            picked.push(idx.into_iter().map(|i| pool[i]).collect());
        }
        let mut it = picked.into_iter();
        CollocationSet {
            interior: it.next().unwrap_or_default(),
            dirichlet: it.next().unwrap_or_default(),
            neumann: it.next().unwrap_or_default(),
            initial: it.next().unwrap_or_default(),
        }
    }
}

/// Collocation pool and initial model drawn from `seed`; training draws use
/// an independent stream of the same seed.
fn seeded_rngs(seed: u64) -> (ChaCha8Rng, ChaCha8Rng) {
    let setup = ChaCha8Rng::seed_from_u64(seed);
    let mut train = ChaCha8Rng::seed_from_u64(seed);
    train.set_stream(1);
    (setup, train)
}

/// Training state: model, optimizer, scheduler, collocation pool and RNG.
#[derive(Debug, Clone)]
pub struct Trainer {
    pub model: HybridModel<f64>,
    pub problem: PdeProblem,
    pub config: TrainConfig,
    pub pool: CollocationSet,
    pub history: Vec<TrainRecord>,
    adam: Adam,
    scheduler: PlateauScheduler,
    batcher: Batcher,
    rng: ChaCha8Rng,
    epoch: usize,
}

impl Trainer {
    pub fn new(arch: Architecture, problem: PdeProblem, config: TrainConfig) -> Result<Self> {
        problem.validate()?;
        config.validate()?;
        if arch.inputs != problem.dim() {
            return Err(Error::Config(format!(
                "model takes {} inputs but the problem has {} coordinates",
                arch.inputs,
                problem.dim()
            )));
        }
        let (mut setup, rng) = seeded_rngs(config.seed);
        let model = HybridModel::init(
            arch,
            InputNormalization::identity(problem.dim()),
            problem.output_scaling(),
            &mut setup,
        )?;
        let pool = sample_points(&problem, &config.plan, &mut setup)?;
        let n = model.parameter_count();
        Ok(Self {
            model,
            problem,
            pool,
            history: Vec::new(),
            adam: Adam::new(n),
            scheduler: PlateauScheduler::new(
                config.lr0,
                config.decay_factor,
                config.patience,
                config.min_lr,
            ),
            batcher: Batcher::default(),
            rng,
            epoch: 0,
            config,
        })
    }

    /// Completed epochs.
    pub fn epoch(&self) -> usize {
        self.epoch
    }

    pub fn lr(&self) -> f64 {
        self.scheduler.lr
    }

    pub fn scheduler(&self) -> &PlateauScheduler {
        &self.scheduler
    }

    pub fn optimizer(&self) -> &Adam {
        &self.adam
    }

    /// Loss of the current model over the whole collocation pool.
    pub fn pool_loss(&self) -> Result<LossBreakdown> {
        total_loss(&self.model, &self.problem, &self.pool, self.config.weights)
    }

    /// One epoch: a minibatch per category, gradient, clipping, Adam update
    /// and scheduler step. On error the state is left as before the call.
    pub fn step(&mut self) -> Result<TrainRecord> {
        let mut rng = self.rng.clone();
        let mut batcher = self.batcher.clone();
        let fresh = if self.config.resample {
            Some(sample_points(&self.problem, &self.config.plan, &mut rng)?)
        } else {
            None
        };
        let batch = batcher.next(fresh.as_ref().unwrap_or(&self.pool), self.config.batch_size, &mut rng);
        let (loss, mut grad) =
            loss_and_gradient(&self.model, &self.problem, &batch, self.config.weights)?;
        clip_global_norm(&mut grad, self.config.clip_norm)?;
        let lr = self.scheduler.lr;
        self.adam.step(&mut self.model.params, &grad, lr)?;
        self.scheduler.step(loss.total);
        self.rng = rng;
        self.batcher = batcher;
        if let Some(pool) = fresh {
            self.pool = pool;
        }
        let record = TrainRecord {
            epoch: self.epoch,
            loss_pde: loss.pde,
            loss_bc: loss.bc,
            loss_ic: loss.ic,
            total: loss.total,
            lr,
        };
        self.epoch += 1;
        Ok(record)
    }

    /// Runs until `max_epochs` epochs are complete, keeping history rows at
    /// the configured stride. On a failure the trainer holds the last good
    /// state, ready for [`Trainer::checkpoint`].
    pub fn run(&mut self, mut on_record: impl FnMut(&TrainRecord)) -> Result<()> {
        let last = self.config.max_epochs;
        while self.epoch < last {
            let r = self.step()?;
            if r.epoch % self.config.loss_log_stride == 0 || r.epoch + 1 == last {
                self.history.push(r);
            }
            on_record(&r);
        }
        Ok(())
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            format: CHECKPOINT_FORMAT.to_string(),
            version: CHECKPOINT_VERSION,
            problem: self.problem,
            config: self.config,
            arch: self.model.arch,
            input_map: self.model.input_map.clone(),
            output_map: self.model.output_map,
            params: self.model.params.clone(),
            adam: self.adam.clone(),
            scheduler: self.scheduler.clone(),
            rng: self.rng.clone(),
            batcher: self.batcher.clone(),
            pool: self.config.resample.then(|| self.pool.clone()),
            epoch: self.epoch,
        }
    }

    pub fn from_checkpoint(ck: Checkpoint) -> Result<Self> {
        ck.validate()?;
        let model = ck.model()?;
        let pool = match ck.pool {
            Some(p) => p,
            None => {
                let (mut setup, _) = seeded_rngs(ck.config.seed);
                HybridModel::<f64>::init(
                    ck.arch,
                    InputNormalization::identity(ck.problem.dim()),
                    ck.problem.output_scaling(),
                    &mut setup,
                )?;
                sample_points(&ck.problem, &ck.config.plan, &mut setup)?
            }
        };
        Ok(Self {
            model,
            problem: ck.problem,
            config: ck.config,
            pool,
            history: Vec::new(),
            adam: ck.adam,
            scheduler: ck.scheduler,
            batcher: ck.batcher,
            rng: ck.rng,
            epoch: ck.epoch,
        })
    }
}
