use serde::{Deserialize, Serialize};

use super::problem::ParabolicProblem;
use crate::engine::par_map;
use crate::error::{Error, Result};
use crate::nonlinearity::NonlinearityKind;
use crate::phase::Field;

/// Absorption bound `C_*(t) = (1 - e^{-2t})^{-1/2}` for the cubic reaction:
/// the value at time `t` of the comparison ODE `y' = y - y^3` started from
/// infinity.
pub fn comparison_bound(t: f64) -> f64 {
    (-(-2.0 * t).exp_m1()).powf(-0.5)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DissipativeReport {
    pub max_norm: f64,
    pub bound: f64,
    pub pass: bool,
    pub t: f64,
    /// Largest seed sup-norm.
    #[serde(rename = "R")]
    pub r: f64,
}

/// Evolves every seed to time `t` and compares the largest sup-norm against
/// [`comparison_bound`]`(t) + tol`.
pub fn dissipative_check(p: &ParabolicProblem, seeds: &[Field], t: f64, tol: f64) -> Result<DissipativeReport> {
    if *p.nonlinearity().kind() != NonlinearityKind::Cubic {
        return Err(Error::UnsupportedNonlinearity(
            "the comparison bound is derived for the cubic reaction".into(),
        ));
    }
    if !(t >= 1.0) {
        return Err(Error::InvalidArgument(format!("dissipative check needs t >= 1, got {t}")));
    }
    if seeds.is_empty() {
        return Err(Error::InvalidArgument("no seeds".into()));
    }
    let norms = par_map(seeds, |u| p.evolve(u, t).map(|v| v.sup_norm()))
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    let max_norm = norms.into_iter().fold(0.0, f64::max);
    let bound = comparison_bound(t);
    Ok(DissipativeReport {
        max_norm,
        bound,
        pass: max_norm <= bound + tol,
        t,
        r: seeds.iter().map(Field::sup_norm).fold(0.0, f64::max),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothingReport {
    pub max_grad: f64,
    pub t: f64,
    #[serde(rename = "R")]
    pub r: f64,
}

/// Largest centered-difference gradient over all seeds after time `t >= 2`.
pub fn smoothing_check(p: &ParabolicProblem, seeds: &[Field], t: f64) -> Result<SmoothingReport> {
    if !(t >= 2.0) {
        return Err(Error::InvalidArgument(format!("smoothing check needs t >= 2, got {t}")));
    }
    let grads = par_map(seeds, |u| p.evolve(u, t).map(|v| v.max_gradient(|_| true)))
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    Ok(SmoothingReport {
        max_grad: grads.into_iter().fold(0.0, f64::max),
        t,
        r: seeds.iter().map(Field::sup_norm).fold(0.0, f64::max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonlinearity::Nonlinearity;
    use crate::phase::GridDomain;
    use std::sync::Arc;

    #[test]
    fn bound_at_one() {
        assert!((comparison_bound(1.0) - 1.07541).abs() < 1e-5);
        assert!(comparison_bound(50.0) == 1.0);
    }

    #[test]
    fn unit_constant_keeps_norm_one() {
        let d = Arc::new(GridDomain::periodic_box(1, 32, 32.0).unwrap());
        let p = ParabolicProblem::new(d.clone(), Nonlinearity::cubic(), 0.01).unwrap();
        let r = dissipative_check(&p, &[Field::constant(d, 1.0)], 1.5, 0.0).unwrap();
        assert_eq!(r.max_norm, 1.0);
        assert!(r.pass);
    }

    #[test]
    fn constant_seed_is_smooth() {
        let d = Arc::new(GridDomain::periodic_box(1, 32, 32.0).unwrap());
        let p = ParabolicProblem::new(d.clone(), Nonlinearity::cubic(), 0.01).unwrap();
        let r = smoothing_check(&p, &[Field::constant(d, 7.0)], 2.0).unwrap();
        assert_eq!(r.max_grad, 0.0);
        assert!(smoothing_check(&p, &[], 1.0).is_err());
    }

    #[test]
    fn plateau_is_not_supported() {
        let d = Arc::new(GridDomain::periodic_box(1, 32, 32.0).unwrap());
        let p = ParabolicProblem::new(d.clone(), Nonlinearity::plateau(2), 0.01).unwrap();
        assert!(matches!(
            dissipative_check(&p, &[Field::constant(d, 1.0)], 1.0, 0.0),
            Err(Error::UnsupportedNonlinearity(_))
        ));
    }
}
