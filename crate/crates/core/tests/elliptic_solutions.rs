use std::sync::Arc;

use attractor_lab::elliptic::{
    attraction_profile_elliptic, equilibrium_set, interior_gradient_check, plateau_assign, solve_elliptic,
    subharmonic_defect, BoundaryData, EllipticProblem, Init, CERTIFIED_RESIDUAL,
};
use attractor_lab::nonlinearity::Nonlinearity;
use attractor_lab::phase::{CellTag, Field, GridDomain};
use attractor_lab::Error;

// Δ_h u - f(u) over interior cells, from raw multi-indices
fn stencil_residual(p: &EllipticProblem, u: &Field) -> f64 {
    let dom = p.domain();
    let h2 = dom.spacing() * dom.spacing();
    let shape = dom.shape().to_vec();
    let mut worst = 0.0f64;
    for c in 0..dom.len() {
        if dom.tag(c) != CellTag::Interior {
            continue;
        }
        let idx = dom.unravel(c);
        let mut lap = 0.0;
        for a in 0..shape.len() {
            for step in [-1i64, 1] {
                let mut j = idx.clone();
                let k = j[a] as i64 + step;
                j[a] = if dom.periodic()[a] {
                    k.rem_euclid(shape[a] as i64) as usize
                } else {
                    assert!(k >= 0 && (k as usize) < shape[a], "interior cell on the box edge");
                    k as usize
                };
                let n = dom.ravel(&j);
                assert_ne!(dom.tag(n), CellTag::Exterior);
                lap += u.get(n) - u.get(c);
            }
        }
        worst = worst.max((lap / h2 - p.nonlinearity().eval(u.get(c))).abs());
    }
    worst
}

fn fourier(x: &[f64]) -> f64 {
    BoundaryData::Fourier {
        mean: 1.0,
        terms: vec![[3.0, 1.5, 0.0]],
    }
    .value_at(x)
}

fn annulus_problem(r_out: f64, spacing: f64) -> EllipticProblem {
    let dom = Arc::new(GridDomain::annulus(1.0, r_out, spacing).unwrap());
    EllipticProblem::new(dom, Nonlinearity::plateau(2), fourier).unwrap()
}

#[test]
fn constant_equilibrium_data_is_reproduced_exactly() {
    for k in 0..=2 {
        let dom = Arc::new(GridDomain::annulus(1.0, 8.0, 0.1).unwrap());
        let p = EllipticProblem::new(dom, Nonlinearity::plateau(2), |_| k as f64).unwrap();
        let sol = solve_elliptic(&p, Init::HarmonicExtension).unwrap();
        let dom = p.domain();
        assert!((0..dom.len()).all(|c| dom.tag(c) == CellTag::Exterior || sol.field.get(c) == k as f64));
        assert_eq!(stencil_residual(&p, &sol.field), 0.0);
        let prof = attraction_profile_elliptic(&sol.field, &equilibrium_set(p.nonlinearity()).unwrap(), &[0.0, 1.0, 2.0])
            .unwrap();
        assert!(prof.entries.iter().all(|e| e.sup_dist == 0.0));
        assert_eq!(subharmonic_defect(&sol.field), 0.0);
        assert_eq!(interior_gradient_check(&sol.field, 2.0).unwrap().max_grad, 0.0);
    }
}

#[test]
fn zero_data_on_an_interval_gives_the_zero_solution() {
    let dom = Arc::new(GridDomain::interval(10.0, 0.05).unwrap());
    let p = EllipticProblem::new(dom, Nonlinearity::cubic(), |_| 0.0).unwrap();
    let sol = solve_elliptic(&p, Init::ConstantGuess(0.0)).unwrap();
    assert!(sol.field.sup_norm() <= 1e-8);
}

#[test]
fn annulus_solution_passes_the_independent_residual() {
    let p = annulus_problem(16.0, 0.1);
    let sol = solve_elliptic(&p, Init::ConstantGuess(0.0)).unwrap();
    assert!(sol.certificate.residual <= CERTIFIED_RESIDUAL);
    let r = stencil_residual(&p, &sol.field);
    assert!(r <= CERTIFIED_RESIDUAL, "{r}");
    assert!(subharmonic_defect(&sol.field) >= -1e-4);
}

#[test]
fn interior_gradient_is_stable_under_refinement() {
    let coarse = solve_elliptic(&annulus_problem(24.0, 0.2), Init::ConstantGuess(0.0)).unwrap();
    let fine = solve_elliptic(&annulus_problem(24.0, 0.1), Init::ConstantGuess(0.0)).unwrap();
    let gc = interior_gradient_check(&coarse.field, 6.0).unwrap().max_grad;
    let gf = interior_gradient_check(&fine.field, 6.0).unwrap().max_grad;
    let ratio = gf / gc;
    assert!((0.5..=2.0).contains(&ratio), "{gc} -> {gf}");
    assert!(matches!(interior_gradient_check(&fine.field, 12.0), Err(Error::EmptyRegion(_))));
}

#[test]
fn strip_profile_decreases_away_from_the_edges() {
    let (width, h) = (40.0, 0.25);
    let dom = Arc::new(GridDomain::strip(width, 5.0, h, true).unwrap());
    let data = BoundaryData::Piecewise {
        axis: 0,
        split: width / 2.0,
        below: -0.5,
        above: 0.5,
    };
    let p = EllipticProblem::new(dom.clone(), Nonlinearity::cubic(), |x| data.value_at(x)).unwrap();
    let sol = solve_elliptic(&p, Init::HarmonicExtension).unwrap();
    assert!(stencil_residual(&p, &sol.field) <= CERTIFIED_RESIDUAL);

    // the cross-section is the two-point problem on [-20, 20]
    let line = Arc::new(GridDomain::interval(width / 2.0, h).unwrap());
    let q = EllipticProblem::new(line.clone(), Nonlinearity::cubic(), |x| if x[0] < 0.0 { -0.5 } else { 0.5 }).unwrap();
    let ref_sol = solve_elliptic(&q, Init::HarmonicExtension).unwrap();
    let ny = dom.shape()[0];
    let col = dom.shape()[1] / 2;
    let worst = (0..ny)
        .map(|i| (sol.field.get(dom.ravel(&[i, col])) - ref_sol.field.get(i)).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-6, "cross-section mismatch {worst}");

    let k = equilibrium_set(&Nonlinearity::cubic()).unwrap();
    let depths: Vec<f64> = (0..=8).map(f64::from).collect();
    let prof = attraction_profile_elliptic(&sol.field, &k, &depths).unwrap();
    assert!(prof.is_nonincreasing(0.0));
    assert!(prof.get(8.0).unwrap() < 1e-3 * prof.get(0.0).unwrap());
    // the solution changes sign on the mid-line, so the deepest band sits on a kink
    let mid = attraction_profile_elliptic(&sol.field, &k, &[19.0]).unwrap();
    assert!(mid.get(19.0).unwrap() > 0.5);
}

#[test]
fn constant_two_data_gives_one_plateau() {
    let dom = Arc::new(GridDomain::annulus(1.0, 12.0, 0.1).unwrap());
    let p = EllipticProblem::new(dom, Nonlinearity::plateau(2), |_| 2.0).unwrap();
    let sol = solve_elliptic(&p, Init::HarmonicExtension).unwrap();
    let a = plateau_assign(&sol.field, &equilibrium_set(p.nonlinearity()).unwrap(), 3.0, 1e-2).unwrap();
    assert_eq!(a.components.len(), 1);
    assert_eq!(a.components[0].n_u, Some(2));
    assert_eq!(a.components[0].deviation, 0.0);
}

#[test]
fn square_of_a_linear_field_is_subharmonic() {
    let dom = Arc::new(GridDomain::from_predicate(0.1, vec![0, 0], vec![41, 41], vec![false, false], |_| true).unwrap());
    let u = Field::from_fn(dom, |x| x[1]);
    let d = subharmonic_defect(&u);
    assert!((d - 2.0).abs() < 1e-9, "{d}");
}

#[test]
fn equilibrium_sets() {
    assert_eq!(equilibrium_set(&Nonlinearity::plateau(2)).unwrap().values, vec![0.0, 1.0, 2.0]);
    assert_eq!(equilibrium_set(&Nonlinearity::cubic()).unwrap().values, vec![-1.0, 0.0, 1.0]);
}
