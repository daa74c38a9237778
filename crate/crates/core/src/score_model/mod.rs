//! Score dataset model and the on-disk exchange formats.
//!
//! A [`ScoreDataset`] holds one similarity score per
//! `(morph, subject role, probe, FRS)` comparison. Datasets are always kept
//! in canonical order so that two datasets built from permuted inputs
//! compare equal.
//!
//! Decision rule used everywhere in this crate: a comparison is accepted
//! when `score >= threshold`.

mod csv_io;
mod thresholds;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::scalar::Scalar;

pub use csv_io::{
    parse_calibration_csv, parse_score_csv, write_calibration_csv, write_score_csv,
    CALIBRATION_HEADER, SCORE_HEADER,
};
pub use thresholds::{read_threshold_json, write_threshold_json, ThresholdTable};

/// The two contributing subjects of a morph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SubjectRole {
    /// Applies for the document. Encoded as `A`.
    Accomplice,
    /// Later travels with the document. Encoded as `B`.
    Criminal,
}

impl SubjectRole {
    pub const ALL: [SubjectRole; 2] = [SubjectRole::Accomplice, SubjectRole::Criminal];

    pub fn code(self) -> &'static str {
        match self {
            SubjectRole::Accomplice => "A",
            SubjectRole::Criminal => "B",
        }
    }

    pub fn from_code(s: &str) -> Option<Self> {
        match s {
            "A" => Some(SubjectRole::Accomplice),
            "B" => Some(SubjectRole::Criminal),
            _ => None,
        }
    }

    pub(crate) fn index(self) -> usize {
        match self {
            SubjectRole::Accomplice => 0,
            SubjectRole::Criminal => 1,
        }
    }
}

impl fmt::Display for SubjectRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// One morph-versus-probe comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRecord<T> {
    pub morph_id: String,
    pub role: SubjectRole,
    pub probe_id: String,
    pub frs_id: String,
    pub score: T,
}

impl<T> ScoreRecord<T> {
    pub fn new(
        morph_id: impl Into<String>,
        role: SubjectRole,
        probe_id: impl Into<String>,
        frs_id: impl Into<String>,
        score: T,
    ) -> Self {
        Self {
            morph_id: morph_id.into(),
            role,
            probe_id: probe_id.into(),
            frs_id: frs_id.into(),
            score,
        }
    }

    fn key(&self) -> (&str, SubjectRole, &str, &str) {
        (&self.morph_id, self.role, &self.probe_id, &self.frs_id)
    }
}

/// How many probes per subject a dataset is expected to carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProbePolicy {
    /// Every `(morph, role, FRS)` has the same probe count, which becomes
    /// `r_max`.
    #[default]
    Uniform,
    /// Counts may differ; `r_max` is the smallest count present.
    Ragged,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScoreError {
    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error("bad header: expected `{expected}`, found `{found}`")]
    Header {
        expected: &'static str,
        found: String,
    },
    #[error("dataset contains no morphs")]
    EmptyDataset,
    #[error("calibration file contains no records")]
    EmptyCalibration,
    #[error(
        "duplicate comparison (morph `{morph_id}`, role {role}, probe `{probe_id}`, FRS `{frs_id}`){}",
        line.map(|l| format!(" at line {l}")).unwrap_or_default()
    )]
    Duplicate {
        morph_id: String,
        role: SubjectRole,
        probe_id: String,
        frs_id: String,
        line: Option<u64>,
    },
    #[error("morph `{morph_id}` has no probes for role {role} under FRS `{frs_id}`")]
    MissingCoverage {
        morph_id: String,
        role: SubjectRole,
        frs_id: String,
    },
    #[error(
        "morph `{morph_id}` has {count} probe(s) for role {role} under FRS `{frs_id}`, \
         expected {expected} under the uniform probe policy"
    )]
    NonUniformProbes {
        morph_id: String,
        role: SubjectRole,
        frs_id: String,
        count: usize,
        expected: usize,
    },
    #[error("threshold table has no FRS entries")]
    EmptyThresholds,
    #[error("threshold for FRS `{frs_id}` is not finite")]
    NonFiniteThreshold { frs_id: String },
    #[error("target FAR {0} is outside (0, 1)")]
    TargetFar(f64),
    #[error("threshold JSON: {0}")]
    Json(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for ScoreError {
    fn from(e: std::io::Error) -> Self {
        ScoreError::Io(e.to_string())
    }
}

/// Validated, canonically ordered set of morph comparison scores.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreDataset<T> {
    records: Vec<ScoreRecord<T>>,
    morphs: Vec<String>,
    frs_ids: Vec<String>,
    r_max: usize,
    policy: ProbePolicy,
}

impl<T: Scalar> ScoreDataset<T> {
    /// Validates `records` under `policy`.
    pub fn from_records(
        records: Vec<ScoreRecord<T>>,
        policy: ProbePolicy,
    ) -> Result<Self, ScoreError> {
        Self::build(records.into_iter().map(|r| (None, r)).collect(), policy)
    }

    pub(crate) fn build(
        mut rows: Vec<(Option<u64>, ScoreRecord<T>)>,
        policy: ProbePolicy,
    ) -> Result<Self, ScoreError> {
        if rows.is_empty() {
            return Err(ScoreError::EmptyDataset);
        }
        for (line, rec) in &rows {
            if !rec.score.is_finite() {
                return Err(ScoreError::Malformed {
                    line: line.unwrap_or(0),
                    message: format!("score for morph `{}` is not finite", rec.morph_id),
                });
            }
        }
        // Stable sort by key, then by line so the duplicate error reports
        // the later occurrence deterministically.
        rows.sort_by(|(la, a), (lb, b)| a.key().cmp(&b.key()).then(la.cmp(lb)));
        for pair in rows.windows(2) {
            let (_, a) = &pair[0];
            let (line, b) = &pair[1];
            if a.key() == b.key() {
                return Err(ScoreError::Duplicate {
                    morph_id: b.morph_id.clone(),
                    role: b.role,
                    probe_id: b.probe_id.clone(),
                    frs_id: b.frs_id.clone(),
                    line: *line,
                });
            }
        }
        let records: Vec<ScoreRecord<T>> = rows.into_iter().map(|(_, r)| r).collect();

        let morphs: Vec<String> = records
            .iter()
            .map(|r| r.morph_id.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let frs_ids: Vec<String> = records
            .iter()
            .map(|r| r.frs_id.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();

        let mut counts: BTreeMap<(&str, SubjectRole, &str), usize> = BTreeMap::new();
        for r in &records {
            *counts.entry((&r.morph_id, r.role, &r.frs_id)).or_default() += 1;
        }
        let mut min_count = usize::MAX;
        let mut uniform: Option<usize> = None;
        for m in &morphs {
            for role in SubjectRole::ALL {
                for f in &frs_ids {
                    let n = counts
                        .get(&(m.as_str(), role, f.as_str()))
                        .copied()
                        .unwrap_or(0);
                    if n == 0 {
                        return Err(ScoreError::MissingCoverage {
                            morph_id: m.clone(),
                            role,
                            frs_id: f.clone(),
                        });
                    }
                    min_count = min_count.min(n);
                    if policy == ProbePolicy::Uniform {
                        match uniform {
                            None => uniform = Some(n),
                            Some(expected) if expected != n => {
                                return Err(ScoreError::NonUniformProbes {
                                    morph_id: m.clone(),
                                    role,
                                    frs_id: f.clone(),
                                    count: n,
                                    expected,
                                })
                            }
                            Some(_) => {}
                        }
                    }
                }
            }
        }

        Ok(Self {
            records,
            morphs,
            frs_ids,
            r_max: min_count,
            policy,
        })
    }
}

impl<T> ScoreDataset<T> {
    /// Records in canonical `(morph, role, probe, FRS)` order.
    pub fn records(&self) -> &[ScoreRecord<T>] {
        &self.records
    }

    /// Sorted distinct morph identifiers.
    pub fn morphs(&self) -> &[String] {
        &self.morphs
    }

    /// Sorted distinct FRS identifiers.
    pub fn frs_ids(&self) -> &[String] {
        &self.frs_ids
    }

    /// Number of MAP rows supported by this dataset.
    pub fn r_max(&self) -> usize {
        self.r_max
    }

    pub fn policy(&self) -> ProbePolicy {
        self.policy
    }

    /// Probe count for each `(morph, role, FRS)`.
    pub fn probes_per_role(&self) -> BTreeMap<(String, SubjectRole, String), usize> {
        let mut out = BTreeMap::new();
        for r in &self.records {
            *out.entry((r.morph_id.clone(), r.role, r.frs_id.clone()))
                .or_default() += 1;
        }
        out
    }
}

/// Ground-truth label of a calibration comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Genuine,
    Impostor,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Genuine => "genuine",
            Label::Impostor => "impostor",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "genuine" => Some(Label::Genuine),
            "impostor" => Some(Label::Impostor),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationRecord<T> {
    pub frs_id: String,
    pub label: Label,
    pub score: T,
}

impl<T> CalibrationRecord<T> {
    pub fn new(frs_id: impl Into<String>, label: Label, score: T) -> Self {
        Self {
            frs_id: frs_id.into(),
            label,
            score,
        }
    }
}

/// Genuine and impostor scores of one FRS.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelledScores<T> {
    pub genuine: Vec<T>,
    pub impostor: Vec<T>,
}

impl<T> Default for LabelledScores<T> {
    fn default() -> Self {
        Self {
            genuine: Vec::new(),
            impostor: Vec::new(),
        }
    }
}

/// Non-fatal findings attached to a parsed calibration file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CalibrationWarning {
    /// The FRS cannot be calibrated: it has no impostor scores.
    NoImpostors { frs_id: String },
}

/// Calibration records grouped by FRS, in sorted FRS order.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationSet<T> {
    pub groups: BTreeMap<String, LabelledScores<T>>,
    pub warnings: Vec<CalibrationWarning>,
}

impl<T: Copy> CalibrationSet<T> {
    pub fn from_records(records: &[CalibrationRecord<T>]) -> Self {
        let mut groups: BTreeMap<String, LabelledScores<T>> = BTreeMap::new();
        for r in records {
            let g = groups.entry(r.frs_id.clone()).or_default();
            match r.label {
                Label::Genuine => g.genuine.push(r.score),
                Label::Impostor => g.impostor.push(r.score),
            }
        }
        let warnings = groups
            .iter()
            .filter(|(_, g)| g.impostor.is_empty())
            .map(|(f, _)| CalibrationWarning::NoImpostors { frs_id: f.clone() })
            .collect();
        Self { groups, warnings }
    }

    /// Flattens back into records, grouped by FRS, genuine first.
    pub fn records(&self) -> Vec<CalibrationRecord<T>> {
        let mut out = Vec::new();
        for (f, g) in &self.groups {
            out.extend(
                g.genuine
                    .iter()
                    .map(|&s| CalibrationRecord::new(f.clone(), Label::Genuine, s)),
            );
            out.extend(
                g.impostor
                    .iter()
                    .map(|&s| CalibrationRecord::new(f.clone(), Label::Impostor, s)),
            );
        }
        out
    }
}
