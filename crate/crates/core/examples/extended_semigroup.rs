//! The two-parameter family `S(t, s) = shift(s) o evolve(t)` on a periodic
//! plane and its semigroup law.
use std::sync::Arc;

use attractor_lab::engine::{semigroup_law_defect, Semigroup};
use attractor_lab::nonlinearity::Nonlinearity;
use attractor_lab::parabolic::{shift, ExtendedSemigroup, ParabolicProblem};
use attractor_lab::phase::{Field, GridDomain, TimePoint};

fn main() -> attractor_lab::Result<()> {
    let domain = Arc::new(GridDomain::periodic_box(2, 32, 16.0)?);
    let p = ParabolicProblem::new(domain.clone(), Nonlinearity::cubic(), 0.01)?;
    let u = Field::from_fn(domain, |x| 1.5 * (x[0] * 0.39).sin() * (x[1] * 0.78).cos());

    let a = p.evolve(&shift(&u, &[3, -5])?, 0.4)?;
    let b = shift(&p.evolve(&u, 0.4)?, &[3, -5])?;
    println!("commutation defect {:e}", a.sup_distance(&b)?);

    let s = ExtendedSemigroup::new(p, 10.0)?;
    let h1 = TimePoint::new(vec![0.3, 1.5, 0.0])?;
    let h2 = TimePoint::new(vec![0.2, 0.5, -2.0])?;
    println!("law defect {:e}", semigroup_law_defect(&s, &h1, &h2, &u)?);
    let v = s.apply(&(&h1 + &h2), &u)?;
    println!("Loc distance moved: {:.4}", s.distance(&u, &v));
    Ok(())
}
