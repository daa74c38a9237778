//! Morphing attack potential evaluation.
//!
//! * [`score_model`]: score/calibration CSV and threshold JSON formats.
//! * [`calibration`]: per-FRS thresholds at a target FAR.
//! * [`metric`]: MAP matrix, robustness/generality curves, `MAP_Avg`.
//! * [`interp`]: lerp/slerp identity blending.
//! * [`simulator`]: seeded synthetic worlds of identities, probes and FRSs.
//! * [`report`]: tables, CSV/JSON outputs and SVG curve charts.
//!
//! Numeric code is generic over [`Scalar`] (`f32`/`f64`) and, for MAP
//! aggregates, over [`Ratio`] (floats or exact [`Rational`]). The aliases
//! below fix the common `f64` choices.

pub mod calibration;
pub mod interp;
pub mod metric;
pub mod report;
pub mod scalar;
pub mod score_model;
pub mod simulator;

pub use scalar::{Ratio, Rational, Scalar};

pub type Embedding = interp::EmbeddingVector<f64>;
pub type Alpha = interp::MorphingFactor<f64>;
pub type Dataset = score_model::ScoreDataset<f64>;
pub type Record = score_model::ScoreRecord<f64>;
pub type Thresholds = score_model::ThresholdTable<f64>;
pub type Matrix = metric::MapMatrix<f64>;
pub type ExactMatrix = metric::MapMatrix<Rational>;
pub type Curves = metric::MapCurves<f64>;
