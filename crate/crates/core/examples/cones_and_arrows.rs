//! Cones, admissible time sets and depth.
use std::sync::Arc;

use attractor_lab::phase::{Cone, GridDomain, TimeArrow, TimePoint};

fn main() -> attractor_lab::Result<()> {
    let orthant = Cone::orthant_product(1, 1)?;
    let h = TimePoint::new(vec![2.0, -5.0])?;
    println!("R+ x R contains {:?}: {}", h.coords(), orthant.contains(&h)?);

    let whole = TimeArrow::whole_cone(orthant);
    println!("depth of {:?}: {}", h.coords(), whole.depth(&h)?);
    for p in whole.probe_times(3.0)? {
        println!("  probe {:?}", p.coords());
    }

    // an annulus as time set: depth is distance to the two circles
    let annulus = Arc::new(GridDomain::annulus(1.0, 40.0, 0.5)?);
    let arrow = TimeArrow::domain(annulus)?;
    let x = TimePoint::new(vec![20.5, 0.0])?;
    println!("annulus depth at {:?}: {:.3}", x.coords(), arrow.depth(&x)?);
    println!("deepest available: {:.3}", arrow.capacity());
    match arrow.deep_time_sampler(25.0) {
        Ok(t) => println!("deep time {:?}", t.coords()),
        Err(e) => println!("D=25: {e}"),
    }
    Ok(())
}
