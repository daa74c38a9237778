use std::fmt::Write as _;

use super::percent;
use crate::metric::MapMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    /// Space-aligned console table.
    Text,
    Markdown,
}

/// Rows are probe counts `r`, columns FRS counts `c`, one decimal.
pub fn render_matrix(matrix: &MapMatrix<f64>, format: TableFormat) -> String {
    let corner = "r \\ c";
    let header: Vec<String> = (1..=matrix.c_max()).map(|c| c.to_string()).collect();
    let body: Vec<(String, Vec<String>)> = matrix
        .rows()
        .iter()
        .enumerate()
        .map(|(i, row)| {
            (
                (i + 1).to_string(),
                row.iter().map(|&v| percent(v)).collect(),
            )
        })
        .collect();

    let mut out = String::new();
    match format {
        TableFormat::Markdown => {
            writeln!(out, "| {corner} | {} |", header.join(" | ")).unwrap();
            writeln!(out, "|---:|{}", "---:|".repeat(header.len())).unwrap();
            for (r, cells) in &body {
                writeln!(out, "| {r} | {} |", cells.join(" | ")).unwrap();
            }
        }
        TableFormat::Text => {
            let first = body
                .iter()
                .map(|(r, _)| r.len())
                .chain([corner.len()])
                .max()
                .unwrap();
            let width = body
                .iter()
                .flat_map(|(_, cells)| cells.iter().map(String::len))
                .chain(header.iter().map(String::len))
                .max()
                .unwrap();
            let line = |lead: &str, cells: &[String]| {
                let cells: Vec<String> = cells.iter().map(|c| format!("{c:>width$}")).collect();
                format!("{lead:>first$} | {}", cells.join(" | "))
            };
            writeln!(out, "{}", line(corner, &header)).unwrap();
            let rule_len = first + header.len() * (width + 3);
            writeln!(out, "{}", "-".repeat(rule_len)).unwrap();
            for (r, cells) in &body {
                writeln!(out, "{}", line(r, cells)).unwrap();
            }
        }
    }
    out
}
