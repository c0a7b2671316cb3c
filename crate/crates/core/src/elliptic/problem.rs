use std::path::PathBuf;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nonlinearity::{Nonlinearity, NonlinearityKind, SuperlinearityCertificate};
use crate::phase::{CellTag, DomainDescriptor, Field, GridDomain};

/// Domain section of a problem file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    /// `0 <= y <= width`, `0 <= x < length`.
    Strip {
        width: f64,
        length: f64,
        #[serde(default)]
        periodic_x: bool,
    },
    Annulus { r_in: f64, r_out: f64 },
    /// Two `side x side` squares joined by a corridor.
    Dumbbell {
        side: f64,
        corridor_length: f64,
        corridor_cells: usize,
    },
    Interval { half_length: f64 },
    /// A JSON [`DomainDescriptor`]; its spacing must match the problem's.
    MaskFile { path: PathBuf },
}

impl DomainSpec {
    pub fn build(&self, spacing: f64) -> Result<GridDomain> {
        match self {
            DomainSpec::Strip {
                width,
                length,
                periodic_x,
            } => GridDomain::strip(*width, *length, spacing, *periodic_x),
            DomainSpec::Annulus { r_in, r_out } => GridDomain::annulus(*r_in, *r_out, spacing),
            DomainSpec::Dumbbell {
                side,
                corridor_length,
                corridor_cells,
            } => GridDomain::dumbbell(*side, *corridor_length, *corridor_cells, spacing),
            DomainSpec::Interval { half_length } => GridDomain::interval(*half_length, spacing),
            DomainSpec::MaskFile { path } => {
                let text = std::fs::read_to_string(path)?;
                let desc: DomainDescriptor = serde_json::from_str(&text)?;
                if (desc.spacing - spacing).abs() > 1e-12 * spacing {
                    return Err(Error::Config(format!(
                        "mask file spacing {} differs from problem spacing {spacing}",
                        desc.spacing
                    )));
                }
                GridDomain::from_descriptor(&desc)
            }
        }
    }
}

/// Dirichlet data on the boundary cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum BoundaryData {
    Constant { value: f64 },
    /// `below` where `x[axis] < split`, `above` otherwise.
    Piecewise {
        axis: usize,
        split: f64,
        below: f64,
        above: f64,
    },
    /// `mean + sum a_k cos(k theta) + b_k sin(k theta)` with `theta` the polar
    /// angle of the cell center; `terms` holds `[k, a_k, b_k]`.
    Fourier { mean: f64, terms: Vec<[f64; 3]> },
}

impl BoundaryData {
    pub fn value_at(&self, x: &[f64]) -> f64 {
        match self {
            BoundaryData::Constant { value } => *value,
            BoundaryData::Piecewise {
                axis,
                split,
                below,
                above,
            } => {
                if x.get(*axis).copied().unwrap_or(0.0) < *split {
                    *below
                } else {
                    *above
                }
            }
            BoundaryData::Fourier { mean, terms } => {
                let theta = if x.len() >= 2 { x[1].atan2(x[0]) } else { 0.0 };
                mean + terms
                    .iter()
                    .map(|[k, a, b]| a * (k * theta).cos() + b * (k * theta).sin())
                    .sum::<f64>()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverOptions {
    /// Initial pseudo-time step.
    #[serde(default = "default_dt")]
    pub dt: f64,
    /// Target sup-norm of the residual.
    #[serde(default = "default_newton_tol")]
    pub newton_tol: f64,
    /// Cap on nonlinear iterations.
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
}

fn default_dt() -> f64 {
    0.1
}

fn default_newton_tol() -> f64 {
    1e-10
}

fn default_max_iters() -> usize {
    400
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            dt: default_dt(),
            newton_tol: default_newton_tol(),
            max_iters: default_max_iters(),
        }
    }
}

/// JSON problem file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EllipticConfig {
    pub domain: DomainSpec,
    pub spacing: f64,
    pub nonlinearity: NonlinearityKind,
    pub boundary_data: BoundaryData,
    #[serde(default)]
    pub solver: SolverOptions,
}

/// `Δu - f(u) = 0` in the interior cells, `u = u0` on the boundary cells.
#[derive(Debug, Clone)]
pub struct EllipticProblem {
    domain: Arc<GridDomain>,
    // full-length; nonzero only on boundary cells
    boundary: Vec<f64>,
    nonlinearity: Nonlinearity,
    certificate: SuperlinearityCertificate,
    pub solver: SolverOptions,
}

impl EllipticProblem {
    /// `boundary_value` is evaluated at the center of every boundary cell.
    pub fn new(
        domain: Arc<GridDomain>,
        nonlinearity: Nonlinearity,
        boundary_value: impl Fn(&[f64]) -> f64,
    ) -> Result<Self> {
        if !(1..=2).contains(&domain.dim()) {
            return Err(Error::InvalidDomain(format!(
                "elliptic problems need dimension 1 or 2, got {}",
                domain.dim()
            )));
        }
        if domain.count(CellTag::Interior) == 0 {
            return Err(Error::InvalidDomain("no interior cells".into()));
        }
        let certificate = nonlinearity
            .certificate(1.0)
            .ok_or_else(|| Error::UnsupportedNonlinearity("f is not superlinear".into()))?;
        let mut boundary = vec![0.0; domain.len()];
        for (c, b) in boundary.iter_mut().enumerate() {
            if domain.tag(c) == CellTag::Boundary {
                *b = boundary_value(&domain.position(c));
                if !b.is_finite() {
                    return Err(Error::InvalidArgument(format!("non-finite boundary value at cell {c}")));
                }
            }
        }
        Ok(EllipticProblem {
            domain,
            boundary,
            nonlinearity,
            certificate,
            solver: SolverOptions::default(),
        })
    }

    pub fn from_config(cfg: &EllipticConfig) -> Result<Self> {
        if !(cfg.spacing > 0.0) {
            return Err(Error::Config(format!("spacing must be positive, got {}", cfg.spacing)));
        }
        let domain = Arc::new(cfg.domain.build(cfg.spacing)?);
        let mut p = Self::new(domain, Nonlinearity::new(cfg.nonlinearity.clone())?, |x| {
            cfg.boundary_data.value_at(x)
        })?;
        p.solver = cfg.solver.clone();
        Ok(p)
    }

    /// Same problem data on another lattice (used for refinement studies).
    pub fn with_domain(&self, domain: Arc<GridDomain>, boundary_value: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let mut p = Self::new(domain, self.nonlinearity.clone(), boundary_value)?;
        p.solver = self.solver.clone();
        Ok(p)
    }

    pub fn domain(&self) -> &Arc<GridDomain> {
        &self.domain
    }

    pub fn nonlinearity(&self) -> &Nonlinearity {
        &self.nonlinearity
    }

    pub fn certificate(&self) -> &SuperlinearityCertificate {
        &self.certificate
    }

    /// Full-length boundary values (zero off the boundary).
    pub fn boundary_values(&self) -> &[f64] {
        &self.boundary
    }

    pub fn boundary_field(&self) -> Field {
        Field::new(self.domain.clone(), self.boundary.clone()).expect("validated")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trip() {
        let text = r#"{
            "domain": {"kind": "annulus", "params": {"r_in": 1, "r_out": 4}},
            "spacing": 0.5,
            "nonlinearity": {"kind": "PlateauPoly", "N": 2},
            "boundary_data": {"kind": "fourier", "params": {"mean": 1, "terms": [[3, 1.5, 0]]}},
            "solver": {"dt": 0.1, "newton_tol": 1e-10, "max_iters": 50}
        }"#;
        let cfg: EllipticConfig = serde_json::from_str(text).unwrap();
        let p = EllipticProblem::from_config(&cfg).unwrap();
        assert_eq!(p.solver.max_iters, 50);
        let b = p.boundary_values();
        let (lo, hi) = b.iter().zip(p.domain().mask()).filter(|(_, &t)| t == CellTag::Boundary).fold(
            (f64::INFINITY, f64::NEG_INFINITY),
            |(lo, hi), (&v, _)| (lo.min(v), hi.max(v)),
        );
        assert!(lo >= -0.5 - 1e-12 && hi <= 2.5 + 1e-12);
    }

    #[test]
    fn unknown_keys_are_named() {
        let text = r#"{
            "domain": {"kind": "interval", "params": {"half_length": 4, "dx": 1}},
            "spacing": 0.5,
            "nonlinearity": {"kind": "Cubic"},
            "boundary_data": {"kind": "constant", "params": {"value": 0}}
        }"#;
        let e = serde_json::from_str::<EllipticConfig>(text).unwrap_err();
        assert!(e.to_string().contains("dx"), "{e}");
    }

    #[test]
    fn piecewise_data() {
        let b = BoundaryData::Piecewise {
            axis: 1,
            split: 5.0,
            below: 0.0,
            above: 2.0,
        };
        assert_eq!(b.value_at(&[0.0, 4.9]), 0.0);
        assert_eq!(b.value_at(&[0.0, 5.0]), 2.0);
    }
}
