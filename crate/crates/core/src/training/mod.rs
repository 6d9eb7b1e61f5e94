//! Adam optimization with plateau decay and global-norm clipping, history
//! output and checkpointing.

mod checkpoint;
mod config;
mod optim;
mod trainer;

pub use checkpoint::{Checkpoint, CHECKPOINT_FORMAT, CHECKPOINT_VERSION};
pub use config::TrainConfig;
pub use optim::{clip_global_norm, Adam, PlateauScheduler};
pub use trainer::{write_history, Batcher, Cursor, TrainRecord, Trainer, HISTORY_HEADER};
