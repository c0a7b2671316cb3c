//! Certified solve of `Δu = f(u)` on an annulus and the plateau diagnostics.
use attractor_lab::elliptic::{
    attraction_profile_elliptic, equilibrium_set, plateau_assign, solve_elliptic, subharmonic_defect,
    EllipticConfig, EllipticProblem, Init,
};

fn main() -> attractor_lab::Result<()> {
    let cfg: EllipticConfig = serde_json::from_str(
        r#"{
            "domain": {"kind": "annulus", "params": {"r_in": 1, "r_out": 24}},
            "spacing": 0.1,
            "nonlinearity": {"kind": "PlateauPoly", "N": 2},
            "boundary_data": {"kind": "fourier", "params": {"mean": 1, "terms": [[3, 1.5, 0]]}}
        }"#,
    )?;
    let p = EllipticProblem::from_config(&cfg)?;
    let sol = solve_elliptic(&p, Init::ConstantGuess(0.0))?;
    println!(
        "residual {:.2e} after {} iterations ({} CG)",
        sol.certificate.residual, sol.certificate.iters, sol.certificate.linear_iters
    );
    let k = equilibrium_set(p.nonlinearity())?;
    println!("equilibria {:?}", k.values);
    let profile = attraction_profile_elliptic(&sol.field, &k, &(0..=10).map(f64::from).collect::<Vec<_>>())?;
    print!("{}", profile.to_csv());
    let a = plateau_assign(&sol.field, &k, 9.0, 1e-3)?;
    for c in &a.components {
        println!("component {} ({} cells): N_u = {:?}", c.id, c.size, c.n_u);
    }
    println!("subharmonic defect {:e}", subharmonic_defect(&sol.field));
    Ok(())
}
