use serde::Serialize;

use super::net::hausdorff;
use super::omega::{omega_estimate, AttractorEstimate, OmegaOptions};
use super::semigroup::Semigroup;
use crate::error::{Error, Result};
use crate::phase::{Bornology, Cone, TimeArrow, TimePoint};

/// Unit direction in the interior of a cone.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionSpec {
    l: TimePoint,
    margin: f64,
}

impl DirectionSpec {
    /// Normalizes `l` and checks that it lies in the interior of `cone`.
    pub fn new(l: &[f64], cone: &Cone) -> Result<Self> {
        let t = TimePoint::new(l.to_vec())?;
        let len = t.norm();
        if !(len > 0.0) {
            return Err(Error::DirectionNotInterior(l.to_vec()));
        }
        let unit = (1.0 / len) * &t;
        let margin = match cone.boundary_distance(&unit) {
            Ok(m) => m,
            Err(Error::TimeOutsideCone(_)) => return Err(Error::DirectionNotInterior(l.to_vec())),
            Err(e) => return Err(e),
        };
        if !(margin > 1e-12) {
            return Err(Error::DirectionNotInterior(l.to_vec()));
        }
        Ok(DirectionSpec { l: unit, margin })
    }

    pub fn unit(&self) -> &TimePoint {
        &self.l
    }

    /// Distance of the unit direction to the cone boundary.
    pub fn margin(&self) -> f64 {
        self.margin
    }

    /// Temporal weight: the first component.
    pub fn kappa(&self) -> f64 {
        self.l.coords()[0]
    }

    pub fn id(&self) -> String {
        let parts: Vec<String> = self.l.coords().iter().map(|c| format!("{c:.4}")).collect();
        format!("l=({})", parts.join(";"))
    }
}

/// The one-parameter semigroup `tau -> S(tau l)` over `R_+`.
pub struct Directional<'a, S> {
    inner: &'a S,
    dir: DirectionSpec,
    arrow: TimeArrow,
}

impl<'a, S: Semigroup> Directional<'a, S> {
    pub fn new(inner: &'a S, dir: DirectionSpec) -> Result<Self> {
        if dir.unit().dim() != inner.arrow().dim() {
            return Err(Error::DimensionMismatch {
                expected: inner.arrow().dim(),
                got: dir.unit().dim(),
            });
        }
        Ok(Directional {
            inner,
            dir,
            arrow: TimeArrow::whole_cone(Cone::orthant_product(1, 0)?),
        })
    }

    pub fn direction(&self) -> &DirectionSpec {
        &self.dir
    }
}

impl<S: Semigroup> Semigroup for Directional<'_, S> {
    type State = S::State;

    fn arrow(&self) -> &TimeArrow {
        &self.arrow
    }

    fn bornology(&self) -> &Bornology {
        self.inner.bornology()
    }

    fn apply(&self, h: &TimePoint, u: &S::State) -> Result<S::State> {
        let tau = h.coords()[0];
        if h.dim() != 1 || tau < 0.0 {
            return Err(Error::TimeOutsideCone(h.coords().to_vec()));
        }
        self.inner.apply(&(tau * self.dir.unit()), u)
    }

    fn distance(&self, a: &S::State, b: &S::State) -> f64 {
        self.inner.distance(a, b)
    }

    fn norm(&self, u: &S::State) -> f64 {
        self.inner.norm(u)
    }

    fn constraint_residual(&self, u: &S::State) -> Option<f64> {
        self.inner.constraint_residual(u)
    }

    fn canonical_key(&self, u: &S::State) -> Vec<f64> {
        self.inner.canonical_key(u)
    }
}

/// Omega-estimate of the directional semigroup `S(tau l)`.
pub fn directional_estimate<S: Semigroup>(
    s: &S,
    dir: &DirectionSpec,
    seeds: &[S::State],
    taus: &[f64],
    eps: f64,
) -> Result<AttractorEstimate<S::State>> {
    let ds = Directional::new(s, dir.clone())?;
    let opts = OmegaOptions {
        provenance: format!("directional {}", dir.id()),
        ..OmegaOptions::default()
    };
    omega_estimate(&ds, seeds, taus, eps, &opts)
}

#[derive(Debug, Clone, Serialize)]
pub struct DirectionalReport {
    pub l1: String,
    pub l2: String,
    pub net_sizes: [usize; 3],
    /// Hausdorff distance between the two directional nets.
    pub between: f64,
    pub l1_vs_full: f64,
    pub l2_vs_full: f64,
}

/// Builds directional nets for `l1`, `l2` and the full multi-parameter net
/// (with the same depth list) and reports their pairwise Hausdorff distances.
pub fn directional_compare<S: Semigroup>(
    s: &S,
    l1: &DirectionSpec,
    l2: &DirectionSpec,
    seeds: &[S::State],
    taus: &[f64],
    eps: f64,
) -> Result<DirectionalReport> {
    let a1 = directional_estimate(s, l1, seeds, taus, eps)?;
    let a2 = directional_estimate(s, l2, seeds, taus, eps)?;
    let full = omega_estimate(s, seeds, taus, eps, &OmegaOptions::default())?;
    let d = |a: &S::State, b: &S::State| s.distance(a, b);
    Ok(DirectionalReport {
        l1: l1.id(),
        l2: l2.id(),
        net_sizes: [a1.points.len(), a2.points.len(), full.points.len()],
        between: hausdorff(&a1.points, &a2.points, d),
        l1_vs_full: hausdorff(&a1.points, &full.points, d),
        l2_vs_full: hausdorff(&a2.points, &full.points, d),
    })
}
