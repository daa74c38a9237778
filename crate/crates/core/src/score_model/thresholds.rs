use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::ScoreError;
use crate::scalar::Scalar;

/// Per-FRS decision thresholds at a common target FAR.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdTable<T> {
    pub target_far: T,
    pub entries: BTreeMap<String, T>,
}

impl<T: Scalar> ThresholdTable<T> {
    pub fn new(target_far: T) -> Self {
        Self {
            target_far,
            entries: BTreeMap::new(),
        }
    }

    pub fn with(mut self, frs_id: impl Into<String>, threshold: T) -> Self {
        self.entries.insert(frs_id.into(), threshold);
        self
    }

    pub fn get(&self, frs_id: &str) -> Option<T> {
        self.entries.get(frs_id).copied()
    }

    fn validate(&self) -> Result<(), ScoreError> {
        let far = self.target_far.widen();
        if !(far > 0.0 && far < 1.0) {
            return Err(ScoreError::TargetFar(far));
        }
        if self.entries.is_empty() {
            return Err(ScoreError::EmptyThresholds);
        }
        if let Some((f, _)) = self.entries.iter().find(|(_, t)| !t.is_finite()) {
            return Err(ScoreError::NonFiniteThreshold { frs_id: f.clone() });
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ThresholdFile {
    target_far: f64,
    thresholds: BTreeMap<String, f64>,
}

/// Writes `{"target_far":x,"thresholds":{"<frs>":t,...}}` with shortest
/// round-trip float formatting, FRS ids sorted.
pub fn write_threshold_json<T: Scalar, W: Write>(
    table: &ThresholdTable<T>,
    mut out: W,
) -> Result<(), ScoreError> {
    table.validate()?;
    let file = ThresholdFile {
        target_far: table.target_far.widen(),
        thresholds: table
            .entries
            .iter()
            .map(|(k, v)| (k.clone(), v.widen()))
            .collect(),
    };
    serde_json::to_writer(&mut out, &file).map_err(|e| ScoreError::Json(e.to_string()))?;
    out.flush()?;
    Ok(())
}

pub fn read_threshold_json<T: Scalar, R: Read>(input: R) -> Result<ThresholdTable<T>, ScoreError> {
    let file: ThresholdFile =
        serde_json::from_reader(input).map_err(|e| ScoreError::Json(e.to_string()))?;
    let table = ThresholdTable {
        target_far: T::narrow(file.target_far),
        entries: file
            .thresholds
            .into_iter()
            .map(|(k, v)| (k, T::narrow(v)))
            .collect(),
    };
    table.validate()?;
    Ok(table)
}
