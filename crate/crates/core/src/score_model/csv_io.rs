use std::io::{Read, Write};

use super::{
    CalibrationRecord, CalibrationSet, Label, ProbePolicy, ScoreDataset, ScoreError, ScoreRecord,
    SubjectRole,
};
use crate::scalar::Scalar;

pub const SCORE_HEADER: &str = "morph_id,subject_role,probe_id,frs_id,score";
pub const CALIBRATION_HEADER: &str = "frs_id,label,score";

struct Rows<R> {
    reader: csv::Reader<R>,
}

impl<R: Read> Rows<R> {
    fn open(input: R, header: &'static str) -> Result<Self, ScoreError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(input);
        let mut first = csv::StringRecord::new();
        let found = match reader.read_record(&mut first) {
            Ok(true) => first.iter().collect::<Vec<_>>().join(","),
            Ok(false) => String::new(),
            Err(e) => return Err(csv_error(e)),
        };
        if found.trim_start_matches('\u{feff}') != header {
            return Err(ScoreError::Header {
                expected: header,
                found,
            });
        }
        Ok(Self { reader })
    }

    /// Next data row with its 1-based line number.
    fn next_row(&mut self, width: usize) -> Result<Option<(u64, csv::StringRecord)>, ScoreError> {
        let mut rec = csv::StringRecord::new();
        loop {
            match self.reader.read_record(&mut rec) {
                Ok(false) => return Ok(None),
                Ok(true) => {}
                Err(e) => return Err(csv_error(e)),
            }
            let line = rec.position().map(|p| p.line()).unwrap_or(0);
            // Blank lines carry a single empty field.
            if rec.len() == 1 && rec[0].is_empty() {
                continue;
            }
            if rec.len() != width {
                return Err(ScoreError::Malformed {
                    line,
                    message: format!("expected {width} columns, found {}", rec.len()),
                });
            }
            return Ok(Some((line, rec)));
        }
    }
}

fn csv_error(e: csv::Error) -> ScoreError {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => ScoreError::Io(io.to_string()),
        other => ScoreError::Malformed {
            line,
            message: format!("{other:?}"),
        },
    }
}

fn parse_score<T: Scalar>(field: &str, line: u64) -> Result<T, ScoreError> {
    let v: T = field.parse().map_err(|_| ScoreError::Malformed {
        line,
        message: format!("score `{field}` is not a number"),
    })?;
    if !v.is_finite() {
        return Err(ScoreError::Malformed {
            line,
            message: format!("score `{field}` is not finite"),
        });
    }
    Ok(v)
}

fn non_empty<'a>(field: &'a str, name: &str, line: u64) -> Result<&'a str, ScoreError> {
    if field.is_empty() {
        Err(ScoreError::Malformed {
            line,
            message: format!("empty {name}"),
        })
    } else {
        Ok(field)
    }
}

/// Parses a score CSV into a validated dataset.
pub fn parse_score_csv<T: Scalar, R: Read>(
    input: R,
    policy: ProbePolicy,
) -> Result<ScoreDataset<T>, ScoreError> {
    let mut rows = Rows::open(input, SCORE_HEADER)?;
    let mut out = Vec::new();
    while let Some((line, rec)) = rows.next_row(5)? {
        let role = SubjectRole::from_code(&rec[1]).ok_or_else(|| ScoreError::Malformed {
            line,
            message: format!("unknown subject role `{}` (expected A or B)", &rec[1]),
        })?;
        out.push((
            Some(line),
            ScoreRecord {
                morph_id: non_empty(&rec[0], "morph_id", line)?.to_string(),
                role,
                probe_id: non_empty(&rec[2], "probe_id", line)?.to_string(),
                frs_id: non_empty(&rec[3], "frs_id", line)?.to_string(),
                score: parse_score(&rec[4], line)?,
            },
        ));
    }
    ScoreDataset::build(out, policy)
}

/// Parses a calibration CSV and groups it by FRS.
pub fn parse_calibration_csv<T: Scalar, R: Read>(
    input: R,
) -> Result<CalibrationSet<T>, ScoreError> {
    let mut rows = Rows::open(input, CALIBRATION_HEADER)?;
    let mut out = Vec::new();
    while let Some((line, rec)) = rows.next_row(3)? {
        let label = Label::parse(&rec[1]).ok_or_else(|| ScoreError::Malformed {
            line,
            message: format!("unknown label `{}` (expected genuine or impostor)", &rec[1]),
        })?;
        out.push(CalibrationRecord {
            frs_id: non_empty(&rec[0], "frs_id", line)?.to_string(),
            label,
            score: parse_score(&rec[2], line)?,
        });
    }
    if out.is_empty() {
        return Err(ScoreError::EmptyCalibration);
    }
    Ok(CalibrationSet::from_records(&out))
}

/// Writes a dataset in canonical row order.
pub fn write_score_csv<T: Scalar, W: Write>(
    dataset: &ScoreDataset<T>,
    mut out: W,
) -> Result<(), ScoreError> {
    writeln!(out, "{SCORE_HEADER}")?;
    for r in dataset.records() {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.morph_id, r.role, r.probe_id, r.frs_id, r.score
        )?;
    }
    Ok(())
}

/// Writes calibration records in the order given.
pub fn write_calibration_csv<T: Scalar, W: Write>(
    records: &[CalibrationRecord<T>],
    mut out: W,
) -> Result<(), ScoreError> {
    writeln!(out, "{CALIBRATION_HEADER}")?;
    for r in records {
        writeln!(out, "{},{},{}", r.frs_id, r.label.as_str(), r.score)?;
    }
    Ok(())
}
