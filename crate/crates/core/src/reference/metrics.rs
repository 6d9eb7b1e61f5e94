use std::io::Write;

use serde::{Deserialize, Serialize};

use super::grid::GridField;
use crate::error::{Error, Result};

/// Relative errors skip reference values at or below this magnitude.
pub const REL_FLOOR: f64 = 1e-8;

/// Pointwise error statistics of a prediction against a reference field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub mean_abs_err: f64,
    pub max_abs_err: f64,
    pub mean_rel_err: f64,
    pub max_rel_err: f64,
    /// Root mean square of the pointwise difference.
    pub l2_err: f64,
}

impl ErrorReport {
    pub const CSV_COLUMNS: [&'static str; 5] = [
        "mean_abs_err",
        "max_abs_err",
        "mean_rel_err",
        "max_rel_err",
        "l2_err",
    ];

    pub fn as_array(&self) -> [f64; 5] {
        [
            self.mean_abs_err,
            self.max_abs_err,
            self.mean_rel_err,
            self.max_rel_err,
            self.l2_err,
        ]
    }
}

pub fn compute_errors(pred: &GridField, reference: &GridField) -> Result<ErrorReport> {
    if !pred.same_grid(reference) {
        return Err(Error::Grid(
            "prediction and reference live on different grids".into(),
        ));
    }
    let n = pred.len() as f64;
    let (mut sum_abs, mut max_abs, mut sum_sq) = (0.0, 0.0f64, 0.0);
    let (mut sum_rel, mut max_rel, mut n_rel) = (0.0, 0.0f64, 0usize);
    for (&p, &r) in pred.values().iter().zip(reference.values()) {
        let d = (p - r).abs();
        sum_abs += d;
        max_abs = max_abs.max(d);
        sum_sq += d * d;
        if r.abs() > REL_FLOOR {
            let rel = d / r.abs();
            sum_rel += rel;
            max_rel = max_rel.max(rel);
            n_rel += 1;
        }
    }
    let report = ErrorReport {
        mean_abs_err: sum_abs / n,
        max_abs_err: max_abs,
        mean_rel_err: if n_rel == 0 { 0.0 } else { sum_rel / n_rel as f64 },
        max_rel_err: max_rel,
        l2_err: (sum_sq / n).sqrt(),
    };
    if report.as_array().iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("error metrics".into()));
    }
    Ok(report)
}

/// One labelled row of an error table.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub labels: Vec<(String, String)>,
    pub report: ErrorReport,
}

/// Writes rows sharing the same label columns, followed by the metric columns.
pub fn write_reports<W: Write>(w: W, rows: &[ReportRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let label_names: Vec<&str> = rows
        .first()
        .map(|r| r.labels.iter().map(|(k, _)| k.as_str()).collect())
        .unwrap_or_default();
    let mut header: Vec<&str> = label_names.clone();
    header.extend(ErrorReport::CSV_COLUMNS);
    out.write_record(&header)?;
    for row in rows {
        let names: Vec<&str> = row.labels.iter().map(|(k, _)| k.as_str()).collect();
        if names != label_names {
            return Err(Error::Grid("report rows carry different label columns".into()));
        }
        let mut rec: Vec<String> = row.labels.iter().map(|(_, v)| v.clone()).collect();
        rec.extend(row.report.as_array().iter().map(f64::to_string));
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}
