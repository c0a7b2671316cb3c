use std::sync::Arc;

use super::problem::{shift, to_lattice, ParabolicProblem};
use crate::engine::{check_in_cone, field_key, FieldDistance, Semigroup};
use crate::error::{Error, Result};
use crate::phase::{Bornology, Cone, Field, GridDomain, LocMetric, TimeArrow, TimePoint};

/// Extended semigroup `S(t, s) = T(s) S(t)` over `C = R_+ x R^d`.
///
/// Spatial components of `h` are displacements in length units, rounded to
/// the nearest lattice vector.
pub struct ExtendedSemigroup {
    problem: ParabolicProblem,
    arrow: TimeArrow,
    bornology: Bornology,
    metric: FieldDistance,
}

impl ExtendedSemigroup {
    /// Uses the local-topology metric centered at the origin cell.
    pub fn new(problem: ParabolicProblem, norm_bound: f64) -> Result<Self> {
        let metric = FieldDistance::Loc(LocMetric::centered_deepest(problem.domain().clone())?);
        Self::with_metric(problem, norm_bound, metric)
    }

    pub fn with_metric(problem: ParabolicProblem, norm_bound: f64, metric: FieldDistance) -> Result<Self> {
        let d = problem.domain().dim();
        Ok(ExtendedSemigroup {
            problem,
            arrow: TimeArrow::whole_cone(Cone::orthant_product(1, d)?),
            bornology: Bornology::bounded(norm_bound),
            metric,
        })
    }

    pub fn problem(&self) -> &ParabolicProblem {
        &self.problem
    }

    pub fn metric(&self) -> &FieldDistance {
        &self.metric
    }
}

/// Evolve for `h[0]`, then shift by the lattice vector nearest to `h[1..]`.
pub fn extended_apply(p: &ParabolicProblem, h: &TimePoint, u: &Field) -> Result<Field> {
    let d = p.domain().dim();
    if h.dim() != d + 1 {
        return Err(Error::DimensionMismatch {
            expected: d + 1,
            got: h.dim(),
        });
    }
    let t = h.coords()[0];
    if t < 0.0 {
        return Err(Error::TimeOutsideCone(h.coords().to_vec()));
    }
    let s = to_lattice(&h.coords()[1..], p.domain().spacing());
    shift(&p.evolve(u, t)?, &s)
}

impl Semigroup for ExtendedSemigroup {
    type State = Field;

    fn arrow(&self) -> &TimeArrow {
        &self.arrow
    }

    fn bornology(&self) -> &Bornology {
        &self.bornology
    }

    fn apply(&self, h: &TimePoint, u: &Field) -> Result<Field> {
        check_in_cone(self, h)?;
        extended_apply(&self.problem, h, u)
    }

    fn distance(&self, a: &Field, b: &Field) -> f64 {
        self.metric.distance(a, b)
    }

    fn norm(&self, u: &Field) -> f64 {
        u.sup_norm()
    }

    fn canonical_key(&self, u: &Field) -> Vec<f64> {
        field_key(u)
    }
}

/// Pure lattice-shift group `T(s)` on a periodic domain, `s` in `R^d` (length
/// units, rounded to the lattice).
pub struct ShiftSemigroup {
    domain: Arc<GridDomain>,
    arrow: TimeArrow,
    bornology: Bornology,
    metric: FieldDistance,
}

impl ShiftSemigroup {
    pub fn new(domain: Arc<GridDomain>) -> Result<Self> {
        if let Some(a) = domain.periodic().iter().position(|p| !p) {
            return Err(Error::NonPeriodicAxis(a));
        }
        Ok(ShiftSemigroup {
            arrow: TimeArrow::whole_cone(Cone::whole_space(domain.dim())?),
            bornology: Bornology::unbounded(),
            metric: FieldDistance::Loc(LocMetric::centered_deepest(domain.clone())?),
            domain,
        })
    }

    pub fn domain(&self) -> &Arc<GridDomain> {
        &self.domain
    }
}

impl Semigroup for ShiftSemigroup {
    type State = Field;

    fn arrow(&self) -> &TimeArrow {
        &self.arrow
    }

    fn bornology(&self) -> &Bornology {
        &self.bornology
    }

    fn apply(&self, h: &TimePoint, u: &Field) -> Result<Field> {
        check_in_cone(self, h)?;
        shift(u, &to_lattice(h.coords(), self.domain.spacing()))
    }

    fn distance(&self, a: &Field, b: &Field) -> f64 {
        self.metric.distance(a, b)
    }

    fn norm(&self, u: &Field) -> f64 {
        u.sup_norm()
    }

    fn canonical_key(&self, u: &Field) -> Vec<f64> {
        field_key(u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::semigroup_law_defect;
    use crate::nonlinearity::Nonlinearity;

    fn tp(c: &[f64]) -> TimePoint {
        TimePoint::new(c.to_vec()).unwrap()
    }

    #[test]
    fn shift_law_is_exact() {
        let d = Arc::new(GridDomain::periodic_box(2, 16, 16.0).unwrap());
        let u = Field::from_fn(d.clone(), |x| (x[0] * 0.7).sin() + x[1] * x[1]);
        let s = ShiftSemigroup::new(d).unwrap();
        let e = semigroup_law_defect(&s, &tp(&[3.0, -1.0]), &tp(&[-5.0, 2.0]), &u).unwrap();
        assert_eq!(e, 0.0);
    }

    #[test]
    fn extended_law_for_split_times() {
        let d = Arc::new(GridDomain::periodic_box(2, 32, 16.0).unwrap());
        let p = ParabolicProblem::new(d.clone(), Nonlinearity::cubic(), 0.01).unwrap();
        let s = ExtendedSemigroup::new(p, 10.0).unwrap();
        let u = Field::from_fn(d, |x| 2.0 * (x[0] * 0.4).sin() * (x[1] * 0.8).cos());
        let e = semigroup_law_defect(&s, &tp(&[0.5, 0.5, 0.0]), &tp(&[0.5, 0.0, 0.5]), &u).unwrap();
        assert!(e < 1e-12, "{e}");
    }

    #[test]
    fn negative_time_is_rejected() {
        let d = Arc::new(GridDomain::periodic_box(1, 8, 8.0).unwrap());
        let p = ParabolicProblem::new(d.clone(), Nonlinearity::cubic(), 0.01).unwrap();
        let s = ExtendedSemigroup::new(p, 10.0).unwrap();
        let u = Field::constant(d, 0.5);
        assert!(matches!(
            s.apply(&tp(&[-0.1, 0.0]), &u),
            Err(Error::TimeOutsideCone(_))
        ));
    }
}
