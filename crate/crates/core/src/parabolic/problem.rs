use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::cyclic::CyclicSolver;
use crate::error::{Error, Result};
use crate::nonlinearity::{Nonlinearity, NonlinearityKind, SuperlinearityCertificate};
use crate::phase::{CellTag, Field, GridDomain};

/// Time-stepping scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    /// Split step: pointwise reaction sub-flow, then implicit diffusion
    /// (one-dimensional line solves, axis by axis).
    Imex,
}

/// JSON problem description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParabolicConfig {
    pub dim: usize,
    /// Cells per axis.
    pub grid: usize,
    /// Box side length.
    #[serde(rename = "L")]
    pub length: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    pub nonlinearity: NonlinearityKind,
    #[serde(default)]
    pub seed: u64,
}

fn default_dt() -> f64 {
    0.01
}

/// `u_t = Δu - f(u)` on a periodic box.
#[derive(Debug, Clone)]
pub struct ParabolicProblem {
    domain: Arc<GridDomain>,
    nonlinearity: Nonlinearity,
    certificate: SuperlinearityCertificate,
    dt: f64,
    scheme: Scheme,
}

impl ParabolicProblem {
    pub fn new(domain: Arc<GridDomain>, nonlinearity: Nonlinearity, dt: f64) -> Result<Self> {
        if !(1..=2).contains(&domain.dim()) {
            return Err(Error::InvalidDomain(format!(
                "parabolic problems need dimension 1 or 2, got {}",
                domain.dim()
            )));
        }
        if domain.periodic().iter().any(|p| !p) || domain.count(CellTag::Interior) != domain.len() {
            return Err(Error::InvalidDomain("parabolic problems need a fully periodic box".into()));
        }
        if domain.shape().iter().any(|&n| n < 3) {
            return Err(Error::InvalidDomain("need at least three cells per axis".into()));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
        }
        let certificate = nonlinearity
            .certificate(1.0)
            .ok_or_else(|| Error::UnsupportedNonlinearity("f is not superlinear".into()))?;
        Ok(ParabolicProblem {
            domain,
            nonlinearity,
            certificate,
            dt,
            scheme: Scheme::Imex,
        })
    }

    pub fn from_config(cfg: &ParabolicConfig) -> Result<Self> {
        if !(cfg.length > 0.0) {
            return Err(Error::Config(format!("L must be positive, got {}", cfg.length)));
        }
        let domain = GridDomain::periodic_box(cfg.dim, cfg.grid, cfg.length)?;
        Self::new(Arc::new(domain), Nonlinearity::new(cfg.nonlinearity.clone())?, cfg.dt)
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

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    /// Number of steps and the uniform step used to reach time `t`.
    pub fn steps_for(&self, t: f64) -> (usize, f64) {
        if t == 0.0 {
            return (0, 0.0);
        }
        let n = ((t / self.dt - 1e-12).ceil() as usize).max(1);
        (n, t / n as f64)
    }

    /// Evolves `u0` to time `t`.
    pub fn evolve(&self, u0: &Field, t: f64) -> Result<Field> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::TimeOutsideCone(vec![t]));
        }
        if !Arc::ptr_eq(u0.domain(), &self.domain) && **u0.domain() != *self.domain {
            return Err(Error::DomainMismatch);
        }
        if !u0.is_finite() {
            return Err(Error::NonFiniteState { step: Some(0) });
        }
        let (n, step) = self.steps_for(t);
        let mut u = u0.values().to_vec();
        if n == 0 {
            return Field::new(self.domain.clone(), u);
        }
        let h = self.domain.spacing();
        let shape = self.domain.shape().to_vec();
        let solvers: Vec<CyclicSolver> = shape.iter().map(|&m| CyclicSolver::new(m, step / (h * h))).collect();
        let mut line = vec![0.0; *shape.iter().max().expect("nonempty")];
        for k in 0..n {
            for v in u.iter_mut() {
                *v = self.nonlinearity.reaction_flow(*v, step);
            }
            self.diffuse(&mut u, &solvers, &mut line);
            if u.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFiniteState { step: Some(k + 1) });
            }
        }
        Field::new(self.domain.clone(), u)
    }

    fn diffuse(&self, u: &mut [f64], solvers: &[CyclicSolver], line: &mut [f64]) {
        let shape = self.domain.shape();
        let strides = self.domain.strides();
        if shape.len() == 1 {
            solvers[0].solve(u);
            return;
        }
        // contiguous lines along axis 1
        for row in u.chunks_mut(shape[1]) {
            solvers[1].solve(row);
        }
        let buf = &mut line[..shape[0]];
        for col in 0..shape[1] {
            for (i, b) in buf.iter_mut().enumerate() {
                *b = u[col + i * strides[0]];
            }
            solvers[0].solve(buf);
            for (i, b) in buf.iter().enumerate() {
                u[col + i * strides[0]] = *b;
            }
        }
    }
}

/// Cyclic shift by whole cells: `shift(u, s)(x) = u(x - s)`.
pub fn shift(u: &Field, s: &[i64]) -> Result<Field> {
    let dom = u.domain();
    if s.len() != dom.dim() {
        return Err(Error::DimensionMismatch {
            expected: dom.dim(),
            got: s.len(),
        });
    }
    if let Some(a) = (0..s.len()).find(|&a| s[a] != 0 && !dom.periodic()[a]) {
        return Err(Error::NonPeriodicAxis(a));
    }
    if s.iter().all(|&k| k == 0) {
        return Ok(u.clone());
    }
    let neg: Vec<i64> = s.iter().map(|k| -k).collect();
    let mut idx = vec![0; dom.dim()];
    let values = (0..dom.len())
        .map(|c| {
            dom.unravel_into(c, &mut idx);
            let src = dom.offset_cell(&idx, &neg).expect("periodic axes wrap");
            u.get(src)
        })
        .collect();
    Field::new(dom.clone(), values)
}

/// Lattice vector nearest to a spatial displacement.
pub fn to_lattice(displacement: &[f64], spacing: f64) -> Vec<i64> {
    displacement.iter().map(|x| (x / spacing).round() as i64).collect()
}
