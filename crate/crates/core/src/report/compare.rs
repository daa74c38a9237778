use std::fmt::Write as _;

use super::{percent, ReportBundle, ReportError};

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub label: String,
    /// Probe count of this row (1-based).
    pub r: usize,
    pub values: Vec<f64>,
    /// Whether each value is the column maximum for this `r`.
    pub best: Vec<bool>,
}

/// Side-by-side MAP rows of several algorithms with column maxima marked.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub r_max: usize,
    pub c_max: usize,
    /// Grouped by bundle in input order, then by `r`.
    pub rows: Vec<ComparisonRow>,
}

/// Every bundle must share the first bundle's shape. Ties mark all maxima.
pub fn compare(bundles: &[ReportBundle]) -> Result<Comparison, ReportError> {
    if bundles.len() < 2 {
        return Err(ReportError::TooFew {
            needed: 2,
            got: bundles.len(),
        });
    }
    let first = &bundles[0];
    let (r_max, c_max) = (first.matrix.r_max(), first.matrix.c_max());
    for b in &bundles[1..] {
        if (b.matrix.r_max(), b.matrix.c_max()) != (r_max, c_max) {
            return Err(ReportError::ShapeMismatch {
                label: b.label.clone(),
                r_max: b.matrix.r_max(),
                c_max: b.matrix.c_max(),
                reference_label: first.label.clone(),
                reference_r_max: r_max,
                reference_c_max: c_max,
            });
        }
    }
    let maxima: Vec<Vec<f64>> = (1..=r_max)
        .map(|r| {
            (1..=c_max)
                .map(|c| {
                    bundles
                        .iter()
                        .map(|b| *b.matrix.get(r, c))
                        .fold(f64::NEG_INFINITY, f64::max)
                })
                .collect()
        })
        .collect();
    let mut rows = Vec::new();
    for b in bundles {
        for r in 1..=r_max {
            let values: Vec<f64> = (1..=c_max).map(|c| *b.matrix.get(r, c)).collect();
            let best = values
                .iter()
                .zip(&maxima[r - 1])
                .map(|(v, m)| v == m)
                .collect();
            rows.push(ComparisonRow {
                label: b.label.clone(),
                r,
                values,
                best,
            });
        }
    }
    Ok(Comparison { r_max, c_max, rows })
}

impl Comparison {
    /// Markdown table; maxima in bold. An `r` column appears only when
    /// there is more than one probe row.
    pub fn to_markdown(&self) -> String {
        let with_r = self.r_max > 1;
        let cols: Vec<String> = (1..=self.c_max).map(|c| c.to_string()).collect();
        let mut out = String::new();
        let lead = if with_r {
            "| algorithm | r |"
        } else {
            "| algorithm |"
        };
        writeln!(out, "{lead} {} |", cols.join(" | ")).unwrap();
        let rule = if with_r { "|---|---:|" } else { "|---|" };
        writeln!(out, "{rule}{}", "---:|".repeat(self.c_max)).unwrap();
        for row in &self.rows {
            let cells: Vec<String> = row
                .values
                .iter()
                .zip(&row.best)
                .map(|(&v, &best)| {
                    let p = format!("{}%", percent(v));
                    if best {
                        format!("**{p}**")
                    } else {
                        p
                    }
                })
                .collect();
            let label = row.label.replace('|', "\\|");
            if with_r {
                writeln!(out, "| {label} | {} | {} |", row.r, cells.join(" | ")).unwrap();
            } else {
                writeln!(out, "| {label} | {} |", cells.join(" | ")).unwrap();
            }
        }
        out
    }
}
