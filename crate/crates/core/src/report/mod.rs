//! Rendering and exchange of MAP results: matrix/curve CSVs, summary JSON,
//! console tables, algorithm comparison tables and SVG curve charts.

mod bundle;
mod compare;
mod svg;
mod table;

use thiserror::Error;

pub use bundle::{
    read_summary_json, write_curves_csv, write_matrix_csv, write_summary_json, Metadata,
    ReportBundle,
};
pub use compare::{compare, Comparison, ComparisonRow};
pub use svg::render_curves_svg;
pub use table::{render_matrix, TableFormat};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReportError {
    #[error("summary JSON: {0}")]
    Json(String),
    #[error("summary `{label}` is inconsistent: {detail}")]
    Inconsistent { label: String, detail: String },
    #[error(
        "shape mismatch: `{label}` is {r_max}x{c_max} but `{reference_label}` is \
         {reference_r_max}x{reference_c_max}"
    )]
    ShapeMismatch {
        label: String,
        r_max: usize,
        c_max: usize,
        reference_label: String,
        reference_r_max: usize,
        reference_c_max: usize,
    },
    #[error("need at least {needed} bundles, got {got}")]
    TooFew { needed: usize, got: usize },
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for ReportError {
    fn from(e: std::io::Error) -> Self {
        ReportError::Io(e.to_string())
    }
}

/// One-decimal percentage, as printed in MAP tables.
pub fn percent(v: f64) -> String {
    format!("{v:.1}")
}
