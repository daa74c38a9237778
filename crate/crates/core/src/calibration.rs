//! Per-FRS threshold calibration at a target false-acceptance rate.
//!
//! Acceptance is `score >= threshold`, so
//! `FAR(τ) = |{s ∈ impostor : s >= τ}| / N` and
//! `FRR(τ) = |{s ∈ genuine : s < τ}| / N`.
//!
//! Thresholds are drawn only from observed impostor scores. When even the
//! largest impostor score admits too many impostors (ties at the top), the
//! threshold becomes [`Threshold::AboveMax`], which rejects every observed
//! impostor.

use thiserror::Error;

use crate::scalar::Scalar;
use crate::score_model::{CalibrationRecord, CalibrationSet, ThresholdTable};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CalibrationError {
    #[error("target FAR {0} is outside (0, 1)")]
    TargetFar(f64),
    #[error("FRS `{frs_id}` has no impostor scores; calibration impossible")]
    NoImpostors { frs_id: String },
    #[error("score collection is empty")]
    EmptyScores,
    #[error("no calibration records")]
    NoRecords,
}

/// Chosen decision threshold of one FRS.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold<T> {
    /// An observed impostor score.
    Observed(T),
    /// Strictly above the largest impostor score.
    AboveMax { max_impostor: T },
}

impl<T: Scalar> Threshold<T> {
    /// Value used with the `>=` rule. For `AboveMax` this is the next
    /// representable value above the maximum, so `s >= v` iff `s > max`.
    pub fn decision_value(&self) -> T {
        match *self {
            Threshold::Observed(t) => t,
            Threshold::AboveMax { max_impostor } => max_impostor.next_up(),
        }
    }

    pub fn is_above_max(&self) -> bool {
        matches!(self, Threshold::AboveMax { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatingPoint<T> {
    pub frs_id: String,
    pub threshold: Threshold<T>,
    pub achieved_far: T,
    /// Present only when genuine scores were supplied.
    pub achieved_frr: Option<T>,
    pub impostor_count: usize,
    pub genuine_count: usize,
}

/// Emitted when an FRS has fewer than `1 / target_far` impostor scores, so
/// the FAR granularity is coarser than the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionWarning {
    pub frs_id: String,
    pub impostor_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Calibration<T> {
    pub table: ThresholdTable<T>,
    /// Sorted by FRS id.
    pub points: Vec<OperatingPoint<T>>,
    pub warnings: Vec<ResolutionWarning>,
}

fn rate<T: Scalar>(count: usize, total: usize) -> T {
    T::from_count(count) / T::from_count(total)
}

pub fn far_at<T: Scalar>(threshold: T, impostor_scores: &[T]) -> Result<T, CalibrationError> {
    if impostor_scores.is_empty() {
        return Err(CalibrationError::EmptyScores);
    }
    let accepted = impostor_scores.iter().filter(|&&s| s >= threshold).count();
    Ok(rate(accepted, impostor_scores.len()))
}

pub fn frr_at<T: Scalar>(threshold: T, genuine_scores: &[T]) -> Result<T, CalibrationError> {
    if genuine_scores.is_empty() {
        return Err(CalibrationError::EmptyScores);
    }
    let rejected = genuine_scores.iter().filter(|&&s| s < threshold).count();
    Ok(rate(rejected, genuine_scores.len()))
}

/// Smallest observed impostor score whose FAR does not exceed `target_far`.
pub fn threshold_for<T: Scalar>(
    impostor_scores: &[T],
    target_far: T,
) -> Result<Threshold<T>, CalibrationError> {
    if impostor_scores.is_empty() {
        return Err(CalibrationError::EmptyScores);
    }
    let n = impostor_scores.len();
    let mut sorted = impostor_scores.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite scores"));

    let mut best = None;
    let mut i = 0;
    while i < n {
        let v = sorted[i];
        let mut j = i + 1;
        while j < n && sorted[j] == v {
            j += 1;
        }
        // j scores are >= v
        if rate::<T>(j, n) <= target_far {
            best = Some(v);
            i = j;
        } else {
            break;
        }
    }
    Ok(match best {
        Some(v) => Threshold::Observed(v),
        None => Threshold::AboveMax {
            max_impostor: sorted[0],
        },
    })
}

/// Calibrates every FRS present in `records`.
pub fn calibrate<T: Scalar>(
    records: &[CalibrationRecord<T>],
    target_far: T,
) -> Result<Calibration<T>, CalibrationError> {
    calibrate_set(&CalibrationSet::from_records(records), target_far)
}

pub fn calibrate_set<T: Scalar>(
    set: &CalibrationSet<T>,
    target_far: T,
) -> Result<Calibration<T>, CalibrationError> {
    if !(target_far > T::zero() && target_far < T::one()) {
        return Err(CalibrationError::TargetFar(target_far.widen()));
    }
    if set.groups.is_empty() {
        return Err(CalibrationError::NoRecords);
    }
    let mut table = ThresholdTable::new(target_far);
    let mut points = Vec::with_capacity(set.groups.len());
    let mut warnings = Vec::new();
    let needed = 1.0 / target_far.widen();

    for (frs_id, scores) in &set.groups {
        if scores.impostor.is_empty() {
            return Err(CalibrationError::NoImpostors {
                frs_id: frs_id.clone(),
            });
        }
        let threshold = threshold_for(&scores.impostor, target_far)?;
        let value = threshold.decision_value();
        let achieved_far = far_at(value, &scores.impostor)?;
        let achieved_frr = if scores.genuine.is_empty() {
            None
        } else {
            Some(frr_at(value, &scores.genuine)?)
        };
        if (scores.impostor.len() as f64) < needed {
            warnings.push(ResolutionWarning {
                frs_id: frs_id.clone(),
                impostor_count: scores.impostor.len(),
            });
        }
        table.entries.insert(frs_id.clone(), value);
        points.push(OperatingPoint {
            frs_id: frs_id.clone(),
            threshold,
            achieved_far,
            achieved_frr,
            impostor_count: scores.impostor.len(),
            genuine_count: scores.genuine.len(),
        });
    }
    Ok(Calibration {
        table,
        points,
        warnings,
    })
}
