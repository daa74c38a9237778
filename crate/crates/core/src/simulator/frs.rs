use super::rng::Stream;
use super::SimError;
use crate::interp::{dot, EmbeddingVector};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Dense {
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    /// Gaussian rows orthonormalized by two passes of modified Gram-Schmidt.
    pub fn random_orthonormal(rows: usize, cols: usize, stream: &mut Stream) -> Self {
        assert!(rows <= cols);
        let mut data = stream.gaussians(rows * cols);
        for i in 0..rows {
            let (done, rest) = data.split_at_mut(i * cols);
            let row = &mut rest[..cols];
            for _pass in 0..2 {
                for j in 0..i {
                    let prev = &done[j * cols..(j + 1) * cols];
                    let p = dot(prev, row);
                    row.iter_mut().zip(prev).for_each(|(x, q)| *x -= p * q);
                }
            }
            let n = dot(row, row).sqrt();
            row.iter_mut().for_each(|x| *x /= n);
        }
        Self { rows, cols, data }
    }
}

/// Synthetic face matcher: cosine similarity after a fixed orthonormal
/// projection onto a random subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct FrsModel {
    pub frs_id: String,
    pub projection: Dense,
}

impl FrsModel {
    pub fn seeded(seed: u64, index: usize, frs_id: String, proj_dim: usize, dim: usize) -> Self {
        let mut stream = Stream::new(seed, "frs", index as u64);
        Self {
            frs_id,
            projection: Dense::random_orthonormal(proj_dim, dim, &mut stream),
        }
    }

    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        self.projection.apply(v)
    }
}

/// Cosine of two already projected vectors.
pub(crate) fn projected_cosine(pa: &[f64], pb: &[f64]) -> Result<f64, SimError> {
    let na = dot(pa, pa).sqrt();
    let nb = dot(pb, pb).sqrt();
    if na == 0.0 || nb == 0.0 {
        return Err(SimError::ZeroProjection);
    }
    Ok(dot(pa, pb) / (na * nb))
}

/// `cos(P a, P b)`.
pub fn frs_score(
    model: &FrsModel,
    a: &EmbeddingVector<f64>,
    b: &EmbeddingVector<f64>,
) -> Result<f64, SimError> {
    let cols = model.projection.cols;
    if a.dim() != cols || b.dim() != cols {
        return Err(SimError::Config(format!(
            "vector dimension {}/{} does not match FRS input dimension {cols}",
            a.dim(),
            b.dim()
        )));
    }
    projected_cosine(&model.project(a.as_slice()), &model.project(b.as_slice()))
}
