use std::path::{Path, PathBuf};

use qcpinn::io::{write_atomic, write_atomic_with};
use qcpinn::physics::{PdeProblem, ProblemKind};
use qcpinn::quantum::Topology;
use qcpinn::reference::{
    compute_errors, default_times, predict_on, reference_fields, write_fields, write_reports,
    GridField, ReportRow,
};
use qcpinn::training::{write_history, Checkpoint, Trainer};
use qcpinn::Model;

use crate::config::RunConfig;
use crate::error::{CliError, Kind, Result};

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::io(format!("creating {}: {e}", dir.display())))
}

fn time_label(t: Option<f64>) -> String {
    t.map(|t| t.to_string()).unwrap_or_default()
}

/// Errors of `model` against the reference at each time, one row per field.
fn evaluate(model: &Model, refs: &[GridField], labels: &[(String, String)]) -> Result<Vec<ReportRow>> {
    refs.iter()
        .map(|r| {
            let pred = predict_on(model, r)?;
            let mut l = labels.to_vec();
            l.push(("t".into(), time_label(r.t())));
            Ok(ReportRow {
                labels: l,
                report: compute_errors(&pred, r)?,
            })
        })
        .collect()
}

/// Summary of a finished training run.
#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub quantum_params: usize,
    pub total_params: usize,
    pub rows: Vec<ReportRow>,
}

/// Trains with `cfg` and writes history, checkpoint, metrics and the
/// predicted, reference and error fields into `out`. A numerical failure
/// still saves the last good checkpoint and history before returning.
pub fn train(cfg: &RunConfig, out: &Path) -> Result<TrainOutcome> {
    let arch = cfg.architecture()?;
    let problem = cfg.pde()?;
    ensure_dir(out)?;
    let mut trainer = Trainer::new(arch, problem, cfg.train_config())?;
    let result = trainer.run(|_| {});
    write_atomic_with(&out.join("history.csv"), |b| write_history(b, &trainer.history))?;
    trainer.checkpoint().save(&out.join("checkpoint.json"))?;
    if let Err(e) = result {
        return Err(CliError::from(e).context(format!("training stopped at epoch {}", trainer.epoch())));
    }

    let refs = reference_fields(&problem, &default_times(&problem))?;
    let rows = evaluate(&trainer.model, &refs, &[])?;
    write_atomic_with(&out.join("metrics.csv"), |b| write_reports(b, &rows))?;
    let preds = refs
        .iter()
        .map(|r| predict_on(&trainer.model, r))
        .collect::<qcpinn::Result<Vec<_>>>()?;
    let errs = preds
        .iter()
        .zip(&refs)
        .map(|(p, r)| p.abs_diff(r))
        .collect::<qcpinn::Result<Vec<_>>>()?;
    write_atomic_with(&out.join("field_pred.csv"), |b| write_fields(b, &preds))?;
    write_atomic_with(&out.join("field_ref.csv"), |b| write_fields(b, &refs))?;
    write_atomic_with(&out.join("field_abs_err.csv"), |b| write_fields(b, &errs))?;
    Ok(TrainOutcome {
        quantum_params: arch.circuit.parameter_count(),
        total_params: trainer.model.parameter_count(),
        rows,
    })
}

/// Scores a checkpoint. When `cfg` is given its problem and circuit must
/// match the checkpoint.
pub fn eval(
    checkpoint: &Path,
    cfg: Option<&RunConfig>,
    problem: Option<ProblemKind>,
    times: Option<Vec<f64>>,
    out: &Path,
) -> Result<Vec<ReportRow>> {
    let ck = Checkpoint::load(checkpoint).map_err(|e| {
        let kind = if matches!(e, qcpinn::Error::Io(_)) { Kind::Io } else { Kind::Config };
        CliError::new(kind, format!("{}: {e}", checkpoint.display()))
    })?;
    if let Some(cfg) = cfg {
        ck.expect_circuit(&cfg.circuit()?)?;
        if cfg.pde()? != ck.problem {
            return Err(CliError::config(format!(
                "checkpoint was trained on a different {} problem than the configuration",
                ck.problem.kind()
            )));
        }
    }
    if let Some(kind) = problem {
        if kind != ck.problem.kind() {
            return Err(CliError::config(format!(
                "checkpoint was trained on {}, not {kind}",
                ck.problem.kind()
            )));
        }
    }
    let model = ck.model()?;
    let times = times.unwrap_or_else(|| default_times(&ck.problem));
    let refs = reference_fields(&ck.problem, &times)?;
    let rows = evaluate(&model, &refs, &[])?;
    ensure_dir(out)?;
    write_atomic_with(&out.join("eval.csv"), |b| write_reports(b, &rows))?;
    Ok(rows)
}

/// Trains every topology in its own subdirectory of `out` and writes
/// `compare.csv` with whatever finished. The first failure is returned after
/// the table is written.
pub fn compare(cfg: &RunConfig, out: &Path) -> Result<Vec<ReportRow>> {
    ensure_dir(out)?;
    let mut rows = Vec::new();
    let mut first_err: Option<CliError> = None;
    for topo in Topology::ALL {
        let run = RunConfig {
            topology: topo,
            ..cfg.clone()
        };
        match train(&run, &out.join(topo.name())) {
            Ok(o) => {
                let labels = vec![
                    ("topology".to_string(), topo.name().to_string()),
                    ("quantum_params".to_string(), o.quantum_params.to_string()),
                    ("total_params".to_string(), o.total_params.to_string()),
                ];
                for r in o.rows {
                    let mut l = labels.clone();
                    l.extend(r.labels);
                    rows.push(ReportRow {
                        labels: l,
                        report: r.report,
                    });
                }
            }
            Err(e) => {
                let e = e.context(topo);
                eprintln!("error: {e}");
                first_err.get_or_insert(e);
            }
        }
    }
    write_atomic_with(&out.join("compare.csv"), |b| write_reports(b, &rows))?;
    match first_err {
        Some(e) => Err(e),
        None => Ok(rows),
    }
}

/// Writes the reference solution: `reference.csv` for steady problems,
/// otherwise one `reference_t{t}.csv` per time. Returns the written paths.
pub fn reference(problem: &PdeProblem, times: Option<Vec<f64>>, out: &Path) -> Result<Vec<PathBuf>> {
    let times = times.unwrap_or_else(|| default_times(problem));
    let fields = reference_fields(problem, &times)?;
    ensure_dir(out)?;
    let mut paths = Vec::new();
    for f in &fields {
        let name = match f.t() {
            None => "reference.csv".to_string(),
            Some(t) => format!("reference_t{t}.csv"),
        };
        let path = out.join(name);
        let mut buf = Vec::new();
        f.write_csv(&mut buf)?;
        write_atomic(&path, &buf)?;
        paths.push(path);
    }
    Ok(paths)
}

/// Parses a comma separated list of times.
pub fn parse_times(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::config(format!("'{t}' is not a time")))
        })
        .collect()
}
