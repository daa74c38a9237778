//! Identity blending: linear and spherical linear interpolation of
//! embedding vectors under a morphing factor.
//!
//! Orientation: `alpha` is the weight of the second operand, so
//! `interpolate(a, b, 0, _) == a` and `interpolate(a, b, 1, _) == b`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::scalar::Scalar;

/// Angles below this fall back to lerp.
pub const SMALL_ANGLE: f64 = 1e-7;
/// Slerp rejects pairs whose angle is within this margin of pi.
pub const ANTIPODAL_MARGIN: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InterpError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("zero vector cannot be interpolated spherically")]
    ZeroVector,
    #[error("vectors are antipodal (angle {angle} rad); the great circle is undefined")]
    Antipodal { angle: f64 },
    #[error("component {index} is not finite")]
    NonFinite { index: usize },
    #[error("empty vector")]
    Empty,
    #[error("morphing factor {0} is outside [0, 1]")]
    FactorOutOfRange(f64),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Real vector with finite components.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingVector<T>(Vec<T>);

impl<T: Scalar> EmbeddingVector<T> {
    pub fn new(components: Vec<T>) -> Result<Self, InterpError> {
        if components.is_empty() {
            return Err(InterpError::Empty);
        }
        if let Some(index) = components.iter().position(|c| !c.is_finite()) {
            return Err(InterpError::NonFinite { index });
        }
        Ok(Self(components))
    }

    /// Builds the L2-normalized version of `components`.
    pub fn unit(components: Vec<T>) -> Result<Self, InterpError> {
        Self::new(components)?.normalized()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }

    pub fn dot(&self, other: &Self) -> T {
        dot(&self.0, &other.0)
    }

    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    pub fn normalized(&self) -> Result<Self, InterpError> {
        let n = self.norm();
        if n == T::zero() {
            return Err(InterpError::ZeroVector);
        }
        Ok(Self(self.0.iter().map(|&c| c / n).collect()))
    }

    /// Cosine of the angle to `other`.
    pub fn cosine(&self, other: &Self) -> Result<T, InterpError> {
        check_dims(self, other)?;
        let denom = self.norm() * other.norm();
        if denom == T::zero() {
            return Err(InterpError::ZeroVector);
        }
        Ok(self.dot(other) / denom)
    }

    /// Angle to `other` in radians, computed as `2·atan2(|â−b̂|, |â+b̂|)`,
    /// which stays accurate near 0 and pi where `acos` does not.
    pub fn angle(&self, other: &Self) -> Result<T, InterpError> {
        check_dims(self, other)?;
        let a = self.normalized()?;
        let b = other.normalized()?;
        let mut diff = T::zero();
        let mut sum = T::zero();
        for (&x, &y) in a.0.iter().zip(&b.0) {
            diff = diff + (x - y) * (x - y);
            sum = sum + (x + y) * (x + y);
        }
        let two = T::one() + T::one();
        Ok(two * diff.sqrt().portable_atan2(sum.sqrt()))
    }
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

fn check_dims<T>(a: &EmbeddingVector<T>, b: &EmbeddingVector<T>) -> Result<(), InterpError> {
    if a.0.len() != b.0.len() {
        return Err(InterpError::DimensionMismatch {
            left: a.0.len(),
            right: b.0.len(),
        });
    }
    Ok(())
}

/// Morphing factor in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct MorphingFactor<T>(T);

impl<T: Scalar> MorphingFactor<T> {
    pub fn new(alpha: T) -> Result<Self, InterpError> {
        if alpha >= T::zero() && alpha <= T::one() {
            Ok(Self(alpha))
        } else {
            Err(InterpError::FactorOutOfRange(alpha.widen()))
        }
    }

    /// Equal blend of both identities.
    pub fn half() -> Self {
        Self(T::from_f64(0.5).unwrap())
    }

    pub fn value(self) -> T {
        self.0
    }

    /// `1 - alpha`.
    pub fn complement(self) -> Self {
        Self(T::one() - self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InterpKind {
    Lerp,
    Slerp,
}

impl InterpKind {
    pub const ALL: [InterpKind; 2] = [InterpKind::Lerp, InterpKind::Slerp];

    pub fn as_str(self) -> &'static str {
        match self {
            InterpKind::Lerp => "lerp",
            InterpKind::Slerp => "slerp",
        }
    }
}

impl fmt::Display for InterpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InterpKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lerp" => Ok(InterpKind::Lerp),
            "slerp" => Ok(InterpKind::Slerp),
            other => Err(format!("unknown interpolation kind `{other}`")),
        }
    }
}

fn blend<T: Scalar>(a: &[T], wa: T, b: &[T], wb: T) -> EmbeddingVector<T> {
    EmbeddingVector(a.iter().zip(b).map(|(&x, &y)| wa * x + wb * y).collect())
}

/// `(1 - alpha)·a + alpha·b`, without renormalization.
pub fn lerp<T: Scalar>(
    a: &EmbeddingVector<T>,
    b: &EmbeddingVector<T>,
    alpha: MorphingFactor<T>,
) -> Result<EmbeddingVector<T>, InterpError> {
    check_dims(a, b)?;
    Ok(blend(&a.0, alpha.complement().0, &b.0, alpha.0))
}

/// Great-circle interpolation:
/// `sin((1-t)θ)/sin θ · a + sin(tθ)/sin θ · b`.
///
/// Inputs need not be unit length; the result then traces the same
/// weighted combination. Angles under [`SMALL_ANGLE`] use [`lerp`].
pub fn slerp<T: Scalar>(
    a: &EmbeddingVector<T>,
    b: &EmbeddingVector<T>,
    t: MorphingFactor<T>,
) -> Result<EmbeddingVector<T>, InterpError> {
    let theta = a.angle(b)?;
    let pi = T::from_f64(std::f64::consts::PI).unwrap();
    if theta >= pi - T::from_f64(ANTIPODAL_MARGIN).unwrap() {
        return Err(InterpError::Antipodal {
            angle: theta.widen(),
        });
    }
    if theta < T::from_f64(SMALL_ANGLE).unwrap() {
        return lerp(a, b, t);
    }
    let sin_theta = theta.portable_sin();
    let wa = (t.complement().0 * theta).portable_sin() / sin_theta;
    let wb = (t.0 * theta).portable_sin() / sin_theta;
    Ok(blend(&a.0, wa, &b.0, wb))
}

/// Dispatches on `kind`.
pub fn interpolate<T: Scalar>(
    a: &EmbeddingVector<T>,
    b: &EmbeddingVector<T>,
    alpha: MorphingFactor<T>,
    kind: InterpKind,
) -> Result<EmbeddingVector<T>, InterpError> {
    match kind {
        InterpKind::Lerp => lerp(a, b, alpha),
        InterpKind::Slerp => slerp(a, b, alpha),
    }
}

/// Reads whitespace-separated vectors, one per non-blank line.
pub fn read_vectors<T: Scalar>(text: &str) -> Result<Vec<EmbeddingVector<T>>, InterpError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let comps = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<T>().map_err(|_| InterpError::Parse {
                    line: i + 1,
                    message: format!("`{tok}` is not a number"),
                })
            })
            .collect::<Result<Vec<T>, _>>()?;
        let v = EmbeddingVector::new(comps).map_err(|e| InterpError::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(v);
    }
    Ok(out)
}

/// Formats a vector as one whitespace-separated line.
pub fn format_vector<T: Scalar>(v: &EmbeddingVector<T>) -> String {
    v.0.iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}
