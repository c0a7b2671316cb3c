//! Small vector-phase systems with closed-form flows.

use super::net::euclidean;
use super::semigroup::{check_in_cone, Semigroup};
use crate::error::{Error, Result};
use crate::phase::{Bornology, Cone, TimeArrow, TimePoint};

fn check_state(u: &[f64], dim: usize) -> Result<()> {
    if u.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: u.len(),
        });
    }
    Ok(())
}

/// `S(h) x = exp(-(h_1 + ... + h_m)) x` on `R^n`, with `C = R_+^m`.
pub struct LinearContraction {
    arrow: TimeArrow,
    bornology: Bornology,
    state_dim: usize,
}

impl LinearContraction {
    pub fn new(time_dim: usize, state_dim: usize, norm_bound: f64) -> Result<Self> {
        if state_dim == 0 {
            return Err(Error::InvalidArgument("state dimension must be positive".into()));
        }
        Ok(LinearContraction {
            arrow: TimeArrow::whole_cone(Cone::orthant_product(time_dim, 0)?),
            bornology: Bornology::bounded(norm_bound),
            state_dim,
        })
    }
}

impl Semigroup for LinearContraction {
    type State = Vec<f64>;

    fn arrow(&self) -> &TimeArrow {
        &self.arrow
    }

    fn bornology(&self) -> &Bornology {
        &self.bornology
    }

    fn apply(&self, h: &TimePoint, u: &Vec<f64>) -> Result<Vec<f64>> {
        check_in_cone(self, h)?;
        check_state(u, self.state_dim)?;
        let k = (-h.coords().iter().sum::<f64>()).exp();
        Ok(u.iter().map(|x| k * x).collect())
    }

    fn distance(&self, a: &Vec<f64>, b: &Vec<f64>) -> f64 {
        euclidean(a, b)
    }

    fn norm(&self, u: &Vec<f64>) -> f64 {
        euclidean(u, &vec![0.0; u.len()])
    }

    fn canonical_key(&self, u: &Vec<f64>) -> Vec<f64> {
        u.clone()
    }
}

/// Planar flow `S(t, s) = R(s) Phi_t` on `C = R_+ x R`, where `Phi_t` is the
/// radial flow `r' = r (1 - r^2)` and `R(s)` the rotation by angle `s`.
///
/// The attractor is the closed unit disk.
pub struct RotationContraction {
    arrow: TimeArrow,
    bornology: Bornology,
}

impl RotationContraction {
    pub fn new(norm_bound: f64) -> Result<Self> {
        Ok(RotationContraction {
            arrow: TimeArrow::whole_cone(Cone::orthant_product(1, 1)?),
            bornology: Bornology::bounded(norm_bound),
        })
    }

    /// Closed-form radius after time `t` starting from `r0 >= 0`.
    pub fn radial(r0: f64, t: f64) -> f64 {
        if r0 == 0.0 {
            return 0.0;
        }
        // r^2 solves the logistic equation z' = 2 z (1 - z)
        let e = (-2.0 * t).exp();
        r0 / (r0 * r0 * (1.0 - e) + e).sqrt()
    }
}

impl Semigroup for RotationContraction {
    type State = Vec<f64>;

    fn arrow(&self) -> &TimeArrow {
        &self.arrow
    }

    fn bornology(&self) -> &Bornology {
        &self.bornology
    }

    fn apply(&self, h: &TimePoint, u: &Vec<f64>) -> Result<Vec<f64>> {
        check_in_cone(self, h)?;
        check_state(u, 2)?;
        let (t, s) = (h.coords()[0], h.coords()[1]);
        let r0 = u[0].hypot(u[1]);
        if r0 == 0.0 {
            return Ok(vec![0.0, 0.0]);
        }
        let k = Self::radial(r0, t) / r0;
        let (x, y) = (k * u[0], k * u[1]);
        let (sn, cs) = s.sin_cos();
        Ok(vec![cs * x - sn * y, sn * x + cs * y])
    }

    fn distance(&self, a: &Vec<f64>, b: &Vec<f64>) -> f64 {
        euclidean(a, b)
    }

    fn norm(&self, u: &Vec<f64>) -> f64 {
        u[0].hypot(u[1])
    }

    fn canonical_key(&self, u: &Vec<f64>) -> Vec<f64> {
        u.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::semigroup::{identity_defect, semigroup_law_defect};

    fn tp(c: &[f64]) -> TimePoint {
        TimePoint::new(c.to_vec()).unwrap()
    }

    #[test]
    fn linear_law_is_exact() {
        let s = LinearContraction::new(2, 1, 3.0).unwrap();
        let d = semigroup_law_defect(&s, &tp(&[1.0, 0.0]), &tp(&[0.0, 1.0]), &vec![2.0]).unwrap();
        assert!(d < 1e-15);
        assert_eq!(identity_defect(&s, &vec![2.0]).unwrap(), 0.0);
    }

    #[test]
    fn outside_cone_is_rejected() {
        let s = LinearContraction::new(2, 1, 3.0).unwrap();
        assert!(matches!(
            s.apply(&tp(&[-1.0, 0.0]), &vec![1.0]),
            Err(Error::TimeOutsideCone(_))
        ));
    }

    #[test]
    fn rotation_law_holds() {
        let s = RotationContraction::new(3.0).unwrap();
        let u = vec![2.0, -1.0];
        let d = semigroup_law_defect(&s, &tp(&[0.4, -2.0]), &tp(&[1.1, 0.5]), &u).unwrap();
        assert!(d < 1e-13);
    }

    #[test]
    fn unit_circle_and_origin_are_invariant() {
        let s = RotationContraction::new(3.0).unwrap();
        let v = s.apply(&tp(&[5.0, 1.0]), &vec![0.6, 0.8]).unwrap();
        assert!((s.norm(&v) - 1.0).abs() < 1e-15);
        assert_eq!(s.apply(&tp(&[5.0, 1.0]), &vec![0.0, 0.0]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn radial_matches_integration() {
        let (mut r, dt) = (3.0f64, 1e-5);
        for _ in 0..100_000 {
            let f = |r: f64| r * (1.0 - r * r);
            let k1 = f(r);
            let k2 = f(r + 0.5 * dt * k1);
            let k3 = f(r + 0.5 * dt * k2);
            let k4 = f(r + dt * k3);
            r += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        assert!((r - RotationContraction::radial(3.0, 1.0)).abs() < 1e-10);
    }
}
