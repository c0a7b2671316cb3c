//! Directional semigroups `tau -> S(tau l)` and their omega-nets.
use attractor_lab::engine::toys::RotationContraction;
use attractor_lab::engine::{directional_compare, DirectionSpec, Semigroup};
use attractor_lab::harness::log_polar_seeds;

fn main() -> attractor_lab::Result<()> {
    let sys = RotationContraction::new(3.0 + 1e-12)?;
    let seeds = log_polar_seeds(3.0, 9.0, 0.1, 64);
    let cone = sys.arrow().cone();
    let l1 = DirectionSpec::new(&[1.0, 1.0], cone)?;
    let l2 = DirectionSpec::new(&[2.0, -1.0], cone)?;
    println!("{} kappa {:.3}, {} kappa {:.3}", l1.id(), l1.kappa(), l2.id(), l2.kappa());
    let r = directional_compare(&sys, &l1, &l2, &seeds, &[6.0], 0.1)?;
    println!("net sizes {:?}", r.net_sizes);
    println!("between {:.4}, l1 vs full {:.4}, l2 vs full {:.4}", r.between, r.l1_vs_full, r.l2_vs_full);

    match DirectionSpec::new(&[0.0, 1.0], cone) {
        Ok(_) => println!("unexpected"),
        Err(e) => println!("boundary direction: {e}"),
    }
    Ok(())
}
