use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the multi-dimensional time space `R^m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimePoint(Vec<f64>);

impl TimePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() || coords.len() > 4 {
            return Err(Error::InvalidArgument(format!(
                "time dimension must be 1..=4, got {}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite time point {coords:?}")));
        }
        Ok(TimePoint(coords))
    }

    pub fn zero(dim: usize) -> Self {
        TimePoint(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &TimePoint) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }
}

impl From<&[f64]> for TimePoint {
    fn from(c: &[f64]) -> Self {
        TimePoint(c.to_vec())
    }
}

impl Add for &TimePoint {
    type Output = TimePoint;
    fn add(self, rhs: &TimePoint) -> TimePoint {
        TimePoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &TimePoint {
    type Output = TimePoint;
    fn sub(self, rhs: &TimePoint) -> TimePoint {
        TimePoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<&TimePoint> for f64 {
    type Output = TimePoint;
    fn mul(self, rhs: &TimePoint) -> TimePoint {
        TimePoint(rhs.0.iter().map(|c| self * c).collect())
    }
}

/// Shape of a closed cone in `R^m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ConeKind {
    /// `R_+^p x R^q`: the first `p` coordinates are nonnegative, the rest free.
    OrthantProduct { p: usize, q: usize },
    /// `{h : <h, n> >= 0}`.
    HalfSpace { normal: Vec<f64> },
}

/// A closed cone with non-empty interior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cone {
    kind: ConeKind,
    interior_witness: TimePoint,
}

impl Cone {
    pub fn orthant_product(p: usize, q: usize) -> Result<Self> {
        let m = p + q;
        let witness = TimePoint::new((0..m).map(|i| if i < p { 1.0 } else { 0.0 }).collect())?;
        Ok(Cone {
            kind: ConeKind::OrthantProduct { p, q },
            interior_witness: witness,
        })
    }

    pub fn half_space(normal: Vec<f64>) -> Result<Self> {
        let len = normal.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(len > 0.0) || !len.is_finite() {
            return Err(Error::InvalidArgument("half-space normal must be nonzero".into()));
        }
        let witness = TimePoint::new(normal.iter().map(|c| c / len).collect())?;
        Ok(Cone {
            kind: ConeKind::HalfSpace { normal },
            interior_witness: witness,
        })
    }

    /// The whole space `R^d`, viewed as the cone `R_+^0 x R^d`.
    pub fn whole_space(d: usize) -> Result<Self> {
        Self::orthant_product(0, d)
    }

    pub fn kind(&self) -> &ConeKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            ConeKind::OrthantProduct { p, q } => p + q,
            ConeKind::HalfSpace { normal } => normal.len(),
        }
    }

    pub fn interior_witness(&self) -> &TimePoint {
        &self.interior_witness
    }

    fn check_dim(&self, h: &TimePoint) -> Result<()> {
        if h.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: h.dim(),
            });
        }
        Ok(())
    }

    pub fn contains(&self, h: &TimePoint) -> Result<bool> {
        self.check_dim(h)?;
        Ok(match &self.kind {
            ConeKind::OrthantProduct { p, .. } => h.coords()[..*p].iter().all(|&c| c >= 0.0),
            ConeKind::HalfSpace { normal } => {
                h.coords().iter().zip(normal).map(|(a, b)| a * b).sum::<f64>() >= 0.0
            }
        })
    }

    /// Euclidean distance from `h` to the boundary of the cone, for `h` in the cone.
    /// The whole space has empty boundary, so the distance is infinite there.
    pub fn boundary_distance(&self, h: &TimePoint) -> Result<f64> {
        if !self.contains(h)? {
            return Err(Error::TimeOutsideCone(h.coords().to_vec()));
        }
        Ok(match &self.kind {
            ConeKind::OrthantProduct { p, .. } => h.coords()[..*p]
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min),
            ConeKind::HalfSpace { normal } => {
                let len = normal.iter().map(|c| c * c).sum::<f64>().sqrt();
                h.coords().iter().zip(normal).map(|(a, b)| a * b).sum::<f64>() / len
            }
        })
    }

    /// Margin of the interior witness (its distance to the boundary).
    pub fn witness_margin(&self) -> f64 {
        self.boundary_distance(&self.interior_witness)
            .unwrap_or(0.0)
            .min(1.0)
    }

    /// Deterministic point of depth exactly `depth`: `(D,..,D,0,..,0)` for orthant
    /// products and `D * n/|n|` for half-spaces.
    pub(crate) fn point_at_depth(&self, depth: f64) -> TimePoint {
        match &self.kind {
            ConeKind::OrthantProduct { p, q } => TimePoint(
                (0..p + q).map(|i| if i < *p { depth } else { 0.0 }).collect(),
            ),
            ConeKind::HalfSpace { .. } => depth * &self.interior_witness,
        }
    }

    /// Directions along which a point can move without losing depth, in the
    /// order used for probe perturbations: `(direction, two_sided)`.
    pub(crate) fn probe_directions(&self) -> Vec<(Vec<f64>, bool)> {
        match &self.kind {
            ConeKind::OrthantProduct { p, q } => (0..p + q)
                .map(|i| {
                    let mut e = vec![0.0; p + q];
                    e[i] = 1.0;
                    (e, i >= *p)
                })
                .collect(),
            ConeKind::HalfSpace { normal } => {
                let n = self.interior_witness.coords().to_vec();
                let mut basis: Vec<Vec<f64>> = vec![n.clone()];
                let mut out = vec![(n, false)];
                for i in 0..normal.len() {
                    let mut v = vec![0.0; normal.len()];
                    v[i] = 1.0;
                    for b in &basis {
                        let proj: f64 = v.iter().zip(b).map(|(a, c)| a * c).sum();
                        for (vk, bk) in v.iter_mut().zip(b) {
                            *vk -= proj * bk;
                        }
                    }
                    let len = v.iter().map(|c| c * c).sum::<f64>().sqrt();
                    if len > 1e-9 {
                        v.iter_mut().for_each(|c| *c /= len);
                        basis.push(v.clone());
                        out.push((v, true));
                    }
                }
                out
            }
        }
    }
}
