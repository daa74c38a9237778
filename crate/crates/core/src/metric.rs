//! Morphing Attack Potential (MAP) matrix, robustness/generality curves and
//! the `MAP_Avg` scalar.
//!
//! `MAP[r, c]` is the percentage of morphs verified with at least `r` probes
//! of both contributing subjects by at least `c` FRSs. Under the default
//! [`FrsQuantifier::Joint`] reading a single FRS has to reach `r` accepted
//! probes for *each* subject before it counts toward the morph's FRS tally.
//!
//! Curve weights are `r / r_max` for rows and `c / c_max` for columns:
//!
//! ```text
//! robustness[r] = Σ_c (c/c_max)·MAP[r,c] / Σ_c (c/c_max)
//! generality[c] = Σ_r (r/r_max)·MAP[r,c] / Σ_r (r/r_max)
//! MAP_Avg       = Σ_{r,c} (r/r_max)(c/c_max)·MAP[r,c]/100 / Σ_{r,c} (r/r_max)(c/c_max)
//! ```
//!
//! The `MAP_Avg` scalarization is the doubly weighted mean consistent with
//! those weights. It is an interpretation, not a certified copy of the
//! ISO/IEC 20059 procedure.
//!
//! All aggregates are generic over [`Ratio`], so they can be evaluated in
//! `f64` or exactly in [`Rational`](crate::scalar::Rational).

use std::collections::BTreeMap;

use thiserror::Error;

use crate::scalar::{Ratio, Scalar};
use crate::score_model::{ScoreDataset, SubjectRole, ThresholdTable};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("no threshold for FRS `{frs_id}`")]
    MissingThreshold { frs_id: String },
    #[error("matrix shape {r_max}x{c_max} has {cells} cells")]
    Shape {
        r_max: usize,
        c_max: usize,
        cells: usize,
    },
}

/// How the "at least c FRSs" quantifier combines the two subjects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FrsQuantifier {
    /// The same FRS must verify `r` probes of each subject.
    #[default]
    Joint,
    /// Each subject separately needs `c` FRSs reaching `r` probes; the FRS
    /// sets may differ.
    Pooled,
}

/// Accepted-probe counts `n[m, f, s]`, dense in sorted morph and FRS order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuccessCounts {
    morphs: Vec<String>,
    frs_ids: Vec<String>,
    counts: Vec<[usize; 2]>,
}

impl SuccessCounts {
    pub fn morphs(&self) -> &[String] {
        &self.morphs
    }

    pub fn frs_ids(&self) -> &[String] {
        &self.frs_ids
    }

    pub fn get(&self, morph: usize, frs: usize, role: SubjectRole) -> usize {
        self.counts[morph * self.frs_ids.len() + frs][role.index()]
    }

    fn row(&self, morph: usize) -> &[[usize; 2]] {
        let n = self.frs_ids.len();
        &self.counts[morph * n..(morph + 1) * n]
    }

    /// Keyed view `(morph_id, frs_id, role) -> n`.
    pub fn to_map(&self) -> BTreeMap<(String, String, SubjectRole), usize> {
        let mut out = BTreeMap::new();
        for (mi, m) in self.morphs.iter().enumerate() {
            for (fi, f) in self.frs_ids.iter().enumerate() {
                for role in SubjectRole::ALL {
                    out.insert((m.clone(), f.clone(), role), self.get(mi, fi, role));
                }
            }
        }
        out
    }
}

pub fn success_counts<T: Scalar>(
    dataset: &ScoreDataset<T>,
    thresholds: &ThresholdTable<T>,
) -> Result<SuccessCounts, MetricError> {
    let frs_ids = dataset.frs_ids().to_vec();
    let taus = frs_ids
        .iter()
        .map(|f| {
            thresholds
                .get(f)
                .ok_or_else(|| MetricError::MissingThreshold { frs_id: f.clone() })
        })
        .collect::<Result<Vec<T>, _>>()?;
    let morphs = dataset.morphs().to_vec();
    let morph_index: BTreeMap<&str, usize> = morphs
        .iter()
        .enumerate()
        .map(|(i, m)| (m.as_str(), i))
        .collect();
    let frs_index: BTreeMap<&str, usize> = frs_ids
        .iter()
        .enumerate()
        .map(|(i, f)| (f.as_str(), i))
        .collect();

    let mut counts = vec![[0usize; 2]; morphs.len() * frs_ids.len()];
    for rec in dataset.records() {
        let fi = frs_index[rec.frs_id.as_str()];
        if rec.score >= taus[fi] {
            let mi = morph_index[rec.morph_id.as_str()];
            counts[mi * frs_ids.len() + fi][rec.role.index()] += 1;
        }
    }
    Ok(SuccessCounts {
        morphs,
        frs_ids,
        counts,
    })
}

/// Grid of success percentages indexed `[r][c]` with 1-based `r`, `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct MapMatrix<R> {
    r_max: usize,
    c_max: usize,
    morph_count: usize,
    values: Vec<R>,
}

impl<R: Ratio> MapMatrix<R> {
    /// Builds a matrix from row-major percentages.
    pub fn from_rows(rows: Vec<Vec<R>>, morph_count: usize) -> Result<Self, MetricError> {
        let r_max = rows.len();
        let c_max = rows.first().map_or(0, Vec::len);
        let cells: usize = rows.iter().map(Vec::len).sum();
        if r_max == 0 || c_max == 0 || cells != r_max * c_max {
            return Err(MetricError::Shape {
                r_max,
                c_max,
                cells,
            });
        }
        Ok(Self {
            r_max,
            c_max,
            morph_count,
            values: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix from successful-morph counts per cell.
    pub fn from_hits(
        r_max: usize,
        c_max: usize,
        morph_count: usize,
        hits: &[u64],
    ) -> Result<Self, MetricError> {
        if r_max == 0 || c_max == 0 || hits.len() != r_max * c_max {
            return Err(MetricError::Shape {
                r_max,
                c_max,
                cells: hits.len(),
            });
        }
        let hundred = R::from_count(100);
        let total = R::from_count(morph_count as u64);
        let values = hits
            .iter()
            .map(|&h| hundred.clone() * R::from_count(h) / total.clone())
            .collect();
        Ok(Self {
            r_max,
            c_max,
            morph_count,
            values,
        })
    }

    pub fn r_max(&self) -> usize {
        self.r_max
    }

    pub fn c_max(&self) -> usize {
        self.c_max
    }

    pub fn morph_count(&self) -> usize {
        self.morph_count
    }

    /// `MAP[r, c]` for 1-based `r` and `c`.
    pub fn get(&self, r: usize, c: usize) -> &R {
        assert!((1..=self.r_max).contains(&r) && (1..=self.c_max).contains(&c));
        &self.values[(r - 1) * self.c_max + (c - 1)]
    }

    pub fn rows(&self) -> Vec<Vec<R>> {
        self.values.chunks(self.c_max).map(<[R]>::to_vec).collect()
    }

    /// Cells in r-major order as `(r, c, value)`.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, &R)> {
        let c_max = self.c_max;
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (i / c_max + 1, i % c_max + 1, v))
    }

    pub fn map<S>(&self, f: impl Fn(&R) -> S) -> MapMatrix<S> {
        MapMatrix {
            r_max: self.r_max,
            c_max: self.c_max,
            morph_count: self.morph_count,
            values: self.values.iter().map(f).collect(),
        }
    }

    /// True when every row and every column is non-increasing.
    pub fn is_monotone(&self) -> bool {
        self.cells().all(|(r, c, v)| {
            (r == self.r_max || v >= self.get(r + 1, c))
                && (c == self.c_max || v >= self.get(r, c + 1))
        })
    }
}

/// Successful-morph count per `(r, c)` cell in r-major order.
pub fn map_hits(counts: &SuccessCounts, r_max: usize, quantifier: FrsQuantifier) -> Vec<u64> {
    let c_max = counts.frs_ids.len();
    let mut hits = vec![0u64; r_max * c_max];
    for m in 0..counts.morphs.len() {
        let row = counts.row(m);
        for r in 1..=r_max {
            let reach = match quantifier {
                FrsQuantifier::Joint => row.iter().filter(|n| n[0] >= r && n[1] >= r).count(),
                FrsQuantifier::Pooled => {
                    let a = row.iter().filter(|n| n[0] >= r).count();
                    let b = row.iter().filter(|n| n[1] >= r).count();
                    a.min(b)
                }
            };
            for c in 1..=reach {
                hits[(r - 1) * c_max + (c - 1)] += 1;
            }
        }
    }
    hits
}

pub fn map_matrix<T: Scalar, R: Ratio>(
    dataset: &ScoreDataset<T>,
    thresholds: &ThresholdTable<T>,
    quantifier: FrsQuantifier,
) -> Result<MapMatrix<R>, MetricError> {
    let counts = success_counts(dataset, thresholds)?;
    let hits = map_hits(&counts, dataset.r_max(), quantifier);
    MapMatrix::from_hits(
        dataset.r_max(),
        counts.frs_ids.len(),
        counts.morphs.len(),
        &hits,
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapCurves<R> {
    /// One value per row `r`.
    pub robustness: Vec<R>,
    /// One value per column `c`.
    pub generality: Vec<R>,
}

fn weight<R: Ratio>(i: usize, max: usize) -> R {
    R::from_count(i as u64) / R::from_count(max as u64)
}

fn weighted_mean<R: Ratio>(terms: impl Iterator<Item = (R, R)>) -> R {
    let (num, den) = terms.fold((R::zero(), R::zero()), |(n, d), (w, v)| {
        (n + w.clone() * v, d + w)
    });
    num / den
}

pub fn curves<R: Ratio>(matrix: &MapMatrix<R>) -> MapCurves<R> {
    let (rm, cm) = (matrix.r_max, matrix.c_max);
    let robustness = (1..=rm)
        .map(|r| weighted_mean((1..=cm).map(|c| (weight(c, cm), matrix.get(r, c).clone()))))
        .collect();
    let generality = (1..=cm)
        .map(|c| weighted_mean((1..=rm).map(|r| (weight(r, rm), matrix.get(r, c).clone()))))
        .collect();
    MapCurves {
        robustness,
        generality,
    }
}

/// Scalar attack potential in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, PartialOrd)]
pub struct MapAvg<R>(pub R);

impl<R: Ratio> MapAvg<R> {
    pub fn value(&self) -> &R {
        &self.0
    }
}

pub fn map_avg<R: Ratio>(matrix: &MapMatrix<R>) -> MapAvg<R> {
    let (rm, cm) = (matrix.r_max, matrix.c_max);
    let hundred = R::from_count(100);
    MapAvg(weighted_mean(matrix.cells().map(|(r, c, v)| {
        (
            weight::<R>(r, rm) * weight(c, cm),
            v.clone() / hundred.clone(),
        )
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::score_model::{ProbePolicy, ScoreRecord};

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    fn fixture() -> MapMatrix<Rational> {
        MapMatrix::from_rows(vec![vec![q(100, 1), q(80, 1)], vec![q(60, 1), q(20, 1)]], 5).unwrap()
    }

    #[test]
    fn two_by_two_curves_exact() {
        let c = curves(&fixture());
        assert_eq!(c.robustness, vec![q(260, 3), q(100, 3)]);
        assert_eq!(c.generality, vec![q(220, 3), q(40, 1)]);
    }

    #[test]
    fn two_by_two_map_avg_exact() {
        // (0.25 + 0.4 + 0.3 + 0.2) / 2.25
        assert_eq!(map_avg(&fixture()).0, q(23, 45));
    }

    #[test]
    fn constant_and_degenerate_matrices() {
        let full = MapMatrix::<f64>::from_hits(3, 2, 4, &[4; 6]).unwrap();
        let c = curves(&full);
        assert!(c
            .robustness
            .iter()
            .chain(&c.generality)
            .all(|&v| v == 100.0));
        assert_eq!(map_avg(&full).0, 1.0);
        let empty = MapMatrix::<f64>::from_hits(3, 2, 4, &[0; 6]).unwrap();
        assert_eq!(map_avg(&empty).0, 0.0);
        let one = MapMatrix::from_rows(vec![vec![q(37, 2)]], 2).unwrap();
        let c = curves(&one);
        assert_eq!(
            (c.robustness, c.generality),
            (vec![q(37, 2)], vec![q(37, 2)])
        );
    }

    #[test]
    fn shape_errors() {
        assert!(MapMatrix::<f64>::from_rows(vec![], 1).is_err());
        assert!(MapMatrix::<f64>::from_rows(vec![vec![1.0, 2.0], vec![1.0]], 1).is_err());
        assert!(MapMatrix::<f64>::from_hits(2, 2, 1, &[0; 3]).is_err());
    }

    fn ds(rows: &[(&str, SubjectRole, &str, &str, f64)]) -> ScoreDataset<f64> {
        ScoreDataset::from_records(
            rows.iter()
                .map(|&(m, r, p, f, s)| ScoreRecord::new(m, r, p, f, s))
                .collect(),
            ProbePolicy::Uniform,
        )
        .unwrap()
    }

    use SubjectRole::{Accomplice as A, Criminal as B};

    #[test]
    fn hand_counted_successes() {
        let d = ds(&[
            ("m1", A, "p1", "f1", 0.9),
            ("m1", A, "p2", "f1", 0.4),
            ("m1", B, "p1", "f1", 0.1),
            ("m1", B, "p2", "f1", 0.2),
        ]);
        let t = ThresholdTable::new(0.001).with("f1", 0.5);
        let n = success_counts(&d, &t).unwrap();
        assert_eq!(n.get(0, 0, A), 1);
        assert_eq!(n.get(0, 0, B), 0);
        assert_eq!(n.to_map()[&("m1".into(), "f1".into(), A)], 1);
    }

    #[test]
    fn missing_threshold_named() {
        let d = ds(&[("m1", A, "p1", "f1", 0.9), ("m1", B, "p1", "f1", 0.9)]);
        let t = ThresholdTable::new(0.001).with("f2", 0.5);
        assert_eq!(
            map_matrix::<f64, f64>(&d, &t, FrsQuantifier::Joint),
            Err(MetricError::MissingThreshold {
                frs_id: "f1".into()
            })
        );
    }

    #[test]
    fn half_passing_gives_fifty_percent() {
        let mut rows = Vec::new();
        let probes = ["p1", "p2"];
        for f in ["f1", "f2", "f3"] {
            for p in probes {
                for role in [A, B] {
                    rows.push(("good", role, p, f, 1.0));
                    rows.push(("bad", role, p, f, 0.0));
                }
            }
        }
        let d = ds(&rows);
        let t = ThresholdTable::new(0.001)
            .with("f1", 0.5)
            .with("f2", 0.5)
            .with("f3", 0.5);
        let m: MapMatrix<f64> = map_matrix(&d, &t, FrsQuantifier::Joint).unwrap();
        assert_eq!((m.r_max(), m.c_max()), (2, 3));
        assert!(m.cells().all(|(_, _, &v)| v == 50.0));
    }

    #[test]
    fn joint_and_pooled_differ() {
        // f1 verifies only A, f2 verifies only B.
        let d = ds(&[
            ("m1", A, "p1", "f1", 0.9),
            ("m1", B, "p1", "f1", 0.1),
            ("m1", A, "p1", "f2", 0.1),
            ("m1", B, "p1", "f2", 0.9),
        ]);
        let t = ThresholdTable::new(0.001).with("f1", 0.5).with("f2", 0.5);
        let joint: MapMatrix<f64> = map_matrix(&d, &t, FrsQuantifier::Joint).unwrap();
        let pooled: MapMatrix<f64> = map_matrix(&d, &t, FrsQuantifier::Pooled).unwrap();
        assert_eq!(joint.rows(), vec![vec![0.0, 0.0]]);
        assert_eq!(pooled.rows(), vec![vec![100.0, 0.0]]);
    }

    #[test]
    fn single_probe_protocol_is_one_row() {
        let mut rows = Vec::new();
        for f in ["c1", "c2", "c3"] {
            rows.push(("m", A, "p", f, 0.9));
            rows.push(("m", B, "p", f, 0.9));
        }
        let d = ds(&rows);
        let t = ThresholdTable::new(0.001)
            .with("c1", 0.5)
            .with("c2", 0.5)
            .with("c3", 0.5);
        let m: MapMatrix<f64> = map_matrix(&d, &t, FrsQuantifier::Joint).unwrap();
        assert_eq!(m.rows(), vec![vec![100.0, 100.0, 100.0]]);
    }
}
