//! Command-line front end: run configuration, subcommands and exit codes.

pub mod commands;
pub mod config;
pub mod error;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use qcpinn::physics::{PdeProblem, ProblemKind};

pub use config::RunConfig;
pub use error::{CliError, Kind, Result};

#[derive(Debug, Parser)]
#[command(name = "qcpinn", version, about = "Hybrid quantum-classical PINN for reservoir seepage problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// TOML run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override a configuration key, e.g. `--set max_epochs=100`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Output directory (overrides `out_dir`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl Common {
    pub fn load(&self) -> Result<RunConfig> {
        let mut set = self.set.clone();
        if let Some(s) = self.seed {
            set.push(format!("seed={s}"));
        }
        let mut cfg = RunConfig::load(self.config.as_deref(), &set)?;
        if let Some(o) = &self.out {
            cfg.out_dir = o.clone();
        }
        Ok(cfg)
    }

    fn configured(&self) -> bool {
        self.config.is_some() || !self.set.is_empty()
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train one model and score it against the reference solution.
    Train(Common),
    /// Score a saved checkpoint.
    Eval {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        checkpoint: PathBuf,
        /// Require the checkpoint to hold this problem.
        #[arg(long)]
        problem: Option<ProblemKind>,
        /// Comma separated evaluation times.
        #[arg(long)]
        times: Option<String>,
    },
    /// Train all three circuit topologies and tabulate their errors.
    Compare(Common),
    /// Write the reference solution on the evaluation grid.
    Reference {
        #[command(flatten)]
        common: Common,
        /// Comma separated evaluation times.
        #[arg(long)]
        times: Option<String>,
    },
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Train(c) => {
            let cfg = c.load()?;
            let o = commands::train(&cfg, &cfg.out_dir)?;
            for r in &o.rows {
                print_row(r);
            }
        }
        Command::Eval {
            common,
            checkpoint,
            problem,
            times,
        } => {
            let cfg = if common.configured() {
                Some(common.load()?)
            } else {
                None
            };
            let out = common
                .out
                .clone()
                .or_else(|| cfg.as_ref().map(|c| c.out_dir.clone()))
                .unwrap_or_else(|| RunConfig::default().out_dir);
            let times = times.as_deref().map(commands::parse_times).transpose()?;
            for r in commands::eval(&checkpoint, cfg.as_ref(), problem, times, &out)? {
                print_row(&r);
            }
        }
        Command::Compare(c) => {
            let cfg = c.load()?;
            for r in commands::compare(&cfg, &cfg.out_dir)? {
                print_row(&r);
            }
        }
        Command::Reference { common, times } => {
            let cfg = common.load()?;
            let problem: PdeProblem = cfg.pde()?;
            let times = times.as_deref().map(commands::parse_times).transpose()?;
            for p in commands::reference(&problem, times, &cfg.out_dir)? {
                println!("{}", p.display());
            }
        }
    }
    Ok(())
}

fn print_row(r: &qcpinn::reference::ReportRow) {
    let labels: Vec<String> = r
        .labels
        .iter()
        .filter(|(_, v)| !v.is_empty())
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    let e = r.report;
    println!(
        "{} mae={:.4e} max_ae={:.4e} mean_rel={:.4e} l2={:.4e}",
        labels.join(" "),
        e.mean_abs_err,
        e.max_abs_err,
        e.mean_rel_err,
        e.l2_err
    );
}
