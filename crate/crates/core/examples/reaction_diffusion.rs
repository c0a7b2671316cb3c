//! Cubic reaction-diffusion on a periodic line: absorption and smoothing.
use std::sync::Arc;

use attractor_lab::harness::rng_for;
use attractor_lab::nonlinearity::Nonlinearity;
use attractor_lab::parabolic::{comparison_bound, dissipative_check, smoothing_check, ParabolicProblem};
use attractor_lab::phase::{Field, GridDomain};
use rand::Rng;

fn main() -> attractor_lab::Result<()> {
    let domain = Arc::new(GridDomain::periodic_box(1, 512, 32.0)?);
    let p = ParabolicProblem::new(domain.clone(), Nonlinearity::cubic(), 0.01)?;
    let seeds: Vec<Field> = (0..6)
        .map(|i| {
            let mut rng = rng_for(1, i);
            let r = 10f64.powi(i as i32 % 3);
            let v = (0..domain.len()).map(|_| rng.gen_range(-r..=r)).collect();
            Field::new(domain.clone(), v).expect("finite")
        })
        .collect();
    for t in [1.0, 2.0] {
        let r = dissipative_check(&p, &seeds, t, 0.02)?;
        println!("t={t}: max |u| {:.6} vs C_*(t) {:.6} pass={}", r.max_norm, r.bound, r.pass);
    }
    println!("C_*(1) = {:.5}", comparison_bound(1.0));
    let s = smoothing_check(&p, &seeds, 2.0)?;
    println!("max gradient at t=2: {:.4} (R = {})", s.max_grad, s.r);

    let u = p.evolve(&Field::constant(domain, 3.0), 1.0)?;
    println!("constant 3 after t=1: {:.9}", u.get(0));
    Ok(())
}
