//! Solutions on a periodic strip are closed under shifts along the strip.
use std::sync::Arc;

use attractor_lab::elliptic::{solve_elliptic, trajectory_shift_closure_check, EllipticProblem, Init};
use attractor_lab::nonlinearity::Nonlinearity;
use attractor_lab::phase::GridDomain;

fn main() -> attractor_lab::Result<()> {
    let strip = Arc::new(GridDomain::strip(6.0, 12.0, 0.25, true)?);
    let p = EllipticProblem::new(strip, Nonlinearity::cubic(), |x| if x[0] < 3.0 { -1.0 } else { 1.0 })?;
    let u = solve_elliptic(&p, Init::HarmonicExtension)?.field;
    for s in [[0, 4], [0, -9], [1, 0]] {
        match trajectory_shift_closure_check(&p, &u, &s) {
            Ok(r) => println!("shift {s:?}: residual {r:.2e}"),
            Err(e) => println!("shift {s:?}: {e}"),
        }
    }
    Ok(())
}
