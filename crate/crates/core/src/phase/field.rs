use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::grid::{CellTag, GridDomain};
use crate::error::{Error, Result};

/// Real values on the non-exterior cells of a [`GridDomain`].
///
/// Values are stored for every cell of the box; exterior entries are kept at
/// zero and never read by norms, metrics or serialization.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    domain: Arc<GridDomain>,
    values: Vec<f64>,
}

impl Field {
    pub fn new(domain: Arc<GridDomain>, mut values: Vec<f64>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::DimensionMismatch {
                expected: domain.len(),
                got: values.len(),
            });
        }
        for (v, &t) in values.iter_mut().zip(domain.mask()) {
            if t == CellTag::Exterior {
                *v = 0.0;
            } else if !v.is_finite() {
                return Err(Error::NonFiniteState { step: None });
            }
        }
        Ok(Field { domain, values })
    }

    pub fn constant(domain: Arc<GridDomain>, c: f64) -> Self {
        Self::from_fn(domain, |_| c)
    }

    /// Field whose value at each non-exterior cell is `f(position)`.
    pub fn from_fn(domain: Arc<GridDomain>, f: impl Fn(&[f64]) -> f64) -> Self {
        let values = (0..domain.len())
            .map(|c| {
                if domain.tag(c) == CellTag::Exterior {
                    0.0
                } else {
                    f(&domain.position(c))
                }
            })
            .collect();
        Field { domain, values }
    }

    pub fn domain(&self) -> &Arc<GridDomain> {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, cell: usize) -> f64 {
        self.values[cell]
    }

    pub fn same_domain(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.domain, &other.domain) || *self.domain == *other.domain
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Sup of `|self - other|` over non-exterior cells.
    pub fn sup_distance(&self, other: &Field) -> Result<f64> {
        if !self.same_domain(other) {
            return Err(Error::DomainMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Euclidean norm of the centered-difference gradient at `cell`; `None`
    /// if a neighbor needed by the stencil is missing or exterior.
    pub fn gradient_norm(&self, cell: usize) -> Option<f64> {
        let dom = &self.domain;
        if dom.tag(cell) == CellTag::Exterior {
            return None;
        }
        let idx = dom.unravel(cell);
        let mut s = 0.0;
        for a in 0..dom.dim() {
            let p = dom.neighbor(cell, &idx, a, 1)?;
            let m = dom.neighbor(cell, &idx, a, -1)?;
            if dom.tag(p) == CellTag::Exterior || dom.tag(m) == CellTag::Exterior {
                return None;
            }
            let g = (self.values[p] - self.values[m]) / (2.0 * dom.spacing());
            s += g * g;
        }
        Some(s.sqrt())
    }

    /// Largest [`Field::gradient_norm`] over the cells accepted by `keep`.
    pub fn max_gradient(&self, keep: impl Fn(usize) -> bool) -> f64 {
        (0..self.domain.len())
            .filter(|&c| keep(c))
            .filter_map(|c| self.gradient_norm(c))
            .fold(0.0, f64::max)
    }

    /// Mean over non-exterior cells.
    pub fn mean(&self) -> f64 {
        let p = self.packed();
        p.iter().sum::<f64>() / p.len().max(1) as f64
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        let values = self
            .values
            .iter()
            .zip(self.domain.mask())
            .map(|(&v, &t)| if t == CellTag::Exterior { 0.0 } else { f(v) })
            .collect();
        Field {
            domain: self.domain.clone(),
            values,
        }
    }

    /// Values of the non-exterior cells in lexicographic order.
    pub fn packed(&self) -> Vec<f64> {
        self.values
            .iter()
            .zip(self.domain.mask())
            .filter(|(_, &t)| t != CellTag::Exterior)
            .map(|(&v, _)| v)
            .collect()
    }

    /// Little-endian f64 bytes of [`Field::packed`].
    pub fn to_bytes(&self) -> Vec<u8> {
        self.packed().iter().flat_map(|v| v.to_le_bytes()).collect()
    }

    pub fn from_bytes(domain: Arc<GridDomain>, bytes: &[u8]) -> Result<Self> {
        let n = domain.len() - domain.count(CellTag::Exterior);
        if bytes.len() != 8 * n {
            return Err(Error::DimensionMismatch {
                expected: 8 * n,
                got: bytes.len(),
            });
        }
        let mut packed = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")));
        let values = domain
            .mask()
            .iter()
            .map(|&t| {
                if t == CellTag::Exterior {
                    0.0
                } else {
                    packed.next().expect("count checked")
                }
            })
            .collect();
        Field::new(domain, values)
    }

    pub fn sidecar(&self) -> FieldSidecar {
        FieldSidecar {
            domain_hash: self.domain.content_hash(),
            sup_norm: self.sup_norm(),
            count: self.domain.len() - self.domain.count(CellTag::Exterior),
        }
    }

    /// Writes `<stem>.bin` and `<stem>.json`; returns both paths.
    pub fn write(&self, dir: &Path, stem: &str) -> Result<[std::path::PathBuf; 2]> {
        let bin = dir.join(format!("{stem}.bin"));
        let json = dir.join(format!("{stem}.json"));
        std::fs::write(&bin, self.to_bytes())?;
        std::fs::write(&json, serde_json::to_string_pretty(&self.sidecar())? + "\n")?;
        Ok([bin, json])
    }
}

/// JSON sidecar for a binary field dump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSidecar {
    pub domain_hash: String,
    pub sup_norm: f64,
    pub count: usize,
}
