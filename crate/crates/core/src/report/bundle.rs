use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::ReportError;
use crate::metric::{curves, map_avg, MapCurves, MapMatrix};

/// Provenance echoed into every summary.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Metadata {
    pub dataset: String,
    pub thresholds: String,
    pub tool_version: String,
    /// Free-form `key=value` echo of the options that shaped the result.
    pub config: Vec<String>,
}

/// MAP result of one algorithm/dataset with its derived quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportBundle {
    pub label: String,
    pub matrix: MapMatrix<f64>,
    pub curves: MapCurves<f64>,
    pub map_avg: f64,
    pub metadata: Metadata,
}

impl ReportBundle {
    pub fn new(label: impl Into<String>, matrix: MapMatrix<f64>, metadata: Metadata) -> Self {
        let curves = curves(&matrix);
        let map_avg = map_avg(&matrix).0;
        Self {
            label: label.into(),
            matrix,
            curves,
            map_avg,
            metadata,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Summary {
    r_max: usize,
    c_max: usize,
    morph_count: usize,
    map_avg: f64,
    label: String,
    matrix: Vec<Vec<f64>>,
    metadata: Metadata,
}

/// Pretty-printed summary JSON with a trailing newline.
pub fn write_summary_json<W: Write>(bundle: &ReportBundle, mut out: W) -> Result<(), ReportError> {
    let s = Summary {
        r_max: bundle.matrix.r_max(),
        c_max: bundle.matrix.c_max(),
        morph_count: bundle.matrix.morph_count(),
        map_avg: bundle.map_avg,
        label: bundle.label.clone(),
        matrix: bundle.matrix.rows(),
        metadata: bundle.metadata.clone(),
    };
    serde_json::to_writer_pretty(&mut out, &s).map_err(|e| ReportError::Json(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

/// Reads a summary and rebuilds the bundle; the stored shape and `map_avg`
/// must agree with the matrix.
pub fn read_summary_json<R: Read>(input: R) -> Result<ReportBundle, ReportError> {
    let s: Summary =
        serde_json::from_reader(input).map_err(|e| ReportError::Json(e.to_string()))?;
    let inconsistent = |detail: String| ReportError::Inconsistent {
        label: s.label.clone(),
        detail,
    };
    if s.matrix
        .iter()
        .flatten()
        .any(|v| !(0.0..=100.0).contains(v))
    {
        return Err(inconsistent("matrix values must lie in [0, 100]".into()));
    }
    let matrix = MapMatrix::from_rows(s.matrix.clone(), s.morph_count)
        .map_err(|e| inconsistent(e.to_string()))?;
    if (matrix.r_max(), matrix.c_max()) != (s.r_max, s.c_max) {
        return Err(inconsistent(format!(
            "declared {}x{} but matrix is {}x{}",
            s.r_max,
            s.c_max,
            matrix.r_max(),
            matrix.c_max()
        )));
    }
    let bundle = ReportBundle::new(s.label.clone(), matrix, s.metadata.clone());
    if (bundle.map_avg - s.map_avg).abs() > 1e-9 {
        return Err(inconsistent(format!(
            "map_avg {} does not match the matrix ({})",
            s.map_avg, bundle.map_avg
        )));
    }
    Ok(bundle)
}

/// `r,c,map_percent`, r-major.
pub fn write_matrix_csv<W: Write>(matrix: &MapMatrix<f64>, mut out: W) -> Result<(), ReportError> {
    writeln!(out, "r,c,map_percent")?;
    for (r, c, v) in matrix.cells() {
        writeln!(out, "{r},{c},{v}")?;
    }
    Ok(())
}

/// `axis,index,value`, robustness rows first.
pub fn write_curves_csv<W: Write>(curves: &MapCurves<f64>, mut out: W) -> Result<(), ReportError> {
    writeln!(out, "axis,index,value")?;
    for (i, v) in curves.robustness.iter().enumerate() {
        writeln!(out, "robustness,{},{v}", i + 1)?;
    }
    for (i, v) in curves.generality.iter().enumerate() {
        writeln!(out, "generality,{},{v}", i + 1)?;
    }
    Ok(())
}
