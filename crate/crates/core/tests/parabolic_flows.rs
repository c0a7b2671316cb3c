use std::f64::consts::PI;
use std::sync::Arc;

use attractor_lab::engine::{
    attraction_profile, backward_extension, directional_estimate, hausdorff, omega_estimate, semigroup_law_defect,
    strict_invariance_defect, AttractorEstimate, DirectionSpec, OmegaOptions, Semigroup, Target,
};
use attractor_lab::nonlinearity::Nonlinearity;
use attractor_lab::parabolic::{
    comparison_bound, dissipative_check, extended_apply, shift, smoothing_check, ExtendedSemigroup, ParabolicProblem,
};
use attractor_lab::phase::{Field, GridDomain, TimePoint};
use attractor_lab::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tp(c: &[f64]) -> TimePoint {
    TimePoint::new(c.to_vec()).unwrap()
}

fn problem(dim: usize, n: usize, length: f64) -> ParabolicProblem {
    let dom = Arc::new(GridDomain::periodic_box(dim, n, length).unwrap());
    ParabolicProblem::new(dom, Nonlinearity::cubic(), 0.01).unwrap()
}

// y' = y - y^3 integrated with classical RK4 at a fine step
fn logistic_rk4(y0: f64, t: f64) -> f64 {
    let f = |y: f64| y - y * y * y;
    let n = 100_000;
    let h = t / n as f64;
    let mut y = y0;
    for _ in 0..n {
        let k1 = f(y);
        let k2 = f(y + 0.5 * h * k1);
        let k3 = f(y + 0.5 * h * k2);
        let k4 = f(y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    y
}

fn constant_net(p: &ParabolicProblem, values: &[f64]) -> AttractorEstimate<Field> {
    AttractorEstimate {
        points: values.iter().map(|&c| Field::constant(p.domain().clone(), c)).collect(),
        epsilon: 0.05,
        depths_used: vec![],
        invariance_defects: vec![],
        invariance_defect: 0.0,
        stabilization: None,
        max_norm_by_depth: vec![],
        provenance: "constants".into(),
    }
}

#[test]
fn constant_three_follows_the_logistic_ode() {
    let p = problem(1, 128, 32.0);
    let u = p.evolve(&Field::constant(p.domain().clone(), 3.0), 1.0).unwrap();
    let y = logistic_rk4(3.0, 1.0);
    for v in u.values() {
        assert!((v - y).abs() <= 1e-6, "{v} vs {y}");
    }
    assert!((comparison_bound(1.0) - 1.07541).abs() < 1e-5);
}

#[test]
fn shifts_act_trivially_on_constants() {
    let p = problem(1, 128, 32.0);
    let u0 = Field::constant(p.domain().clone(), 3.0);
    let a = extended_apply(&p, &tp(&[1.0, 0.0]), &u0).unwrap();
    for s in [1.0, -2.5, 7.25] {
        let b = extended_apply(&p, &tp(&[1.0, s]), &u0).unwrap();
        assert_eq!(a.values(), b.values());
    }
    assert_eq!(extended_apply(&p, &tp(&[0.0, 0.0]), &u0).unwrap().values(), u0.values());
}

#[test]
fn extended_law_on_a_square_box() {
    let p = problem(2, 32, 16.0);
    let u0 = Field::from_fn(p.domain().clone(), |x| (2.0 * PI * x[0] / 16.0).sin() + 0.5 * (2.0 * PI * x[1] / 8.0).cos());
    let s = ExtendedSemigroup::new(p, 10.0).unwrap();
    let d = semigroup_law_defect(&s, &tp(&[0.5, 1.0, 0.0]), &tp(&[0.5, 0.0, 1.0]), &u0).unwrap();
    assert!(d <= 1e-8, "{d}");
}

#[test]
fn evolution_commutes_with_lattice_shifts() {
    let p = problem(1, 64, 16.0);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let u0 = Field::new(p.domain().clone(), (0..64).map(|_| rng.gen_range(-2.0..2.0)).collect()).unwrap();
    for s in [1i64, 5, -17] {
        let a = shift(&p.evolve(&u0, 0.7).unwrap(), &[s]).unwrap();
        let b = p.evolve(&shift(&u0, &[s]).unwrap(), 0.7).unwrap();
        assert!(a.sup_distance(&b).unwrap() <= 1e-12);
    }
}

#[test]
fn absorption_holds_for_several_seed_norms() {
    let p = problem(1, 256, 32.0);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for r in [2.0, 10.0, 100.0] {
        let seeds: Vec<Field> = (0..4)
            .map(|_| Field::new(p.domain().clone(), (0..256).map(|_| rng.gen_range(-r..=r)).collect()).unwrap())
            .collect();
        let rep = dissipative_check(&p, &seeds, 1.0, 0.02).unwrap();
        assert!(rep.pass, "R={r}: {} > {}", rep.max_norm, rep.bound);
    }
    let one = dissipative_check(&p, &[Field::constant(p.domain().clone(), 1.0)], 3.0, 0.0).unwrap();
    assert_eq!(one.max_norm, 1.0);
}

#[test]
fn smoothing_is_stable_under_refinement() {
    let coarse = problem(1, 1024, 32.0);
    let fine = problem(1, 2048, 32.0);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let noise: Vec<f64> = (0..1024).map(|_| rng.gen_range(-10.0..=10.0)).collect();
    let u_c = Field::new(coarse.domain().clone(), noise.clone()).unwrap();
    let u_f = Field::new(fine.domain().clone(), noise.iter().flat_map(|&v| [v, v]).collect()).unwrap();
    let gc = smoothing_check(&coarse, &[u_c], 2.0).unwrap().max_grad;
    let gf = smoothing_check(&fine, &[u_f], 2.0).unwrap().max_grad;
    let ratio = gf / gc;
    assert!((0.5..=2.0).contains(&ratio), "{gc} -> {gf}");
    let flat = smoothing_check(&coarse, &[Field::constant(coarse.domain().clone(), 0.4)], 2.0).unwrap();
    assert_eq!(flat.max_grad, 0.0);
}

#[test]
fn small_sine_follows_the_linearization() {
    let (n, l, amp, t) = (1024usize, 32.0, 0.01, 0.5);
    let p = problem(1, n, l);
    let k = 2.0 * PI / l;
    let u0 = Field::from_fn(p.domain().clone(), |x| amp * (k * x[0]).sin());
    let g = p.evolve(&u0, t).unwrap().max_gradient(|_| true);
    let expected = ((1.0 - k * k) * t).exp() * k * amp;
    assert!((g - expected).abs() <= 0.05 * expected, "{g} vs {expected}");
}

#[test]
fn non_equilibrium_constant_is_not_invariant() {
    let p = problem(1, 64, 32.0);
    let s = ExtendedSemigroup::new(p.clone(), 10.0).unwrap();
    let d = strict_invariance_defect(&constant_net(&p, &[0.3]), &s, &tp(&[1.0, 0.0])).unwrap();
    let moved = (logistic_rk4(0.3, 1.0) - 0.3).abs();
    assert!(d >= 0.1);
    assert!((d - moved).abs() < 1e-9, "{d} vs {moved}");
}

#[test]
fn equilibria_form_an_invariant_net() {
    let p = problem(1, 64, 32.0);
    let s = ExtendedSemigroup::new(p.clone(), 10.0).unwrap();
    let seeds: Vec<Field> = [0.0, 1.0, -1.0].iter().map(|&c| Field::constant(p.domain().clone(), c)).collect();
    let est = omega_estimate(&s, &seeds, &[1.0, 2.0], 0.05, &OmegaOptions::default()).unwrap();
    assert_eq!(est.points.len(), 3);
    for c in [0.0, 1.0, -1.0] {
        assert!(est.points.iter().any(|u| u.values().iter().all(|&v| v == c)));
    }
    assert!(est.invariance_defect <= 1e-12);
    let d = strict_invariance_defect(&est, &s, &tp(&[2.0, 3.0])).unwrap();
    assert!(d <= 1e-12);
}

#[test]
fn absorbing_ball_profile_vanishes_at_depth_one() {
    let p = problem(1, 256, 32.0);
    let s = ExtendedSemigroup::new(p.clone(), 10.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut seeds: Vec<Field> = (0..3)
        .map(|_| Field::new(p.domain().clone(), (0..256).map(|_| rng.gen_range(-10.0..=10.0)).collect()).unwrap())
        .collect();
    seeds.push(Field::constant(p.domain().clone(), 10.0));
    seeds.push(Field::constant(p.domain().clone(), -10.0));
    let prof = attraction_profile(&s, &seeds, &Target::NormBall(1.0755), &[1.0, 2.0], None).unwrap();
    assert_eq!(prof.get(1.0), Some(0.0));
    assert_eq!(prof.get(2.0), Some(0.0));
}

#[test]
fn pure_time_and_diagonal_directions_agree() {
    let p = problem(1, 64, 32.0);
    let s = ExtendedSemigroup::new(p.clone(), 10.0).unwrap();
    let seeds: Vec<Field> = [0.0, 1.0, -1.0, 0.5, -2.0]
        .iter()
        .map(|&c| Field::constant(p.domain().clone(), c))
        .collect();
    let eps = 0.05;
    let mut nets = Vec::new();
    for l in [[1.0, 0.0], [1.0, 1.0]] {
        let dir = DirectionSpec::new(&l, s.arrow().cone()).unwrap();
        nets.push(directional_estimate(&s, &dir, &seeds, &[6.0 / dir.kappa()], eps).unwrap().points);
    }
    let d = hausdorff(&nets[0], &nets[1], |a, b| s.distance(a, b));
    assert!(d <= 2.0 * eps, "{d}");
    assert_eq!(nets[0].len(), 3);
}

#[test]
fn backward_chain_through_an_equilibrium() {
    let p = problem(1, 64, 32.0);
    let s = ExtendedSemigroup::new(p.clone(), 10.0).unwrap();
    let net = constant_net(&p, &[-1.0, 0.0, 1.0]);
    let one = Field::constant(p.domain().clone(), 1.0);
    let chain = backward_extension(&net, &s, &one, &tp(&[1.0, 0.0]), 4).unwrap();
    assert_eq!(chain.max_defect, 0.0);
    assert!(chain.chain.iter().all(|u| u.values().iter().all(|&v| v == 1.0)));
    let five = Field::constant(p.domain().clone(), 5.0);
    assert!(matches!(
        backward_extension(&net, &s, &five, &tp(&[1.0, 0.0]), 4),
        Err(Error::NotOnAttractor { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ordered_data_stays_ordered(
        u in prop::collection::vec(-1.5f64..1.5, 48),
        gap in prop::collection::vec(0.0f64..1.0, 48),
        t in 0.05f64..1.0,
    ) {
        let p = problem(1, 48, 12.0);
        let v: Vec<f64> = u.iter().zip(&gap).map(|(a, g)| a + g).collect();
        let eu = p.evolve(&Field::new(p.domain().clone(), u).unwrap(), t).unwrap();
        let ev = p.evolve(&Field::new(p.domain().clone(), v).unwrap(), t).unwrap();
        for (a, b) in eu.values().iter().zip(ev.values()) {
            prop_assert!(*a <= *b + 1e-12);
        }
    }

    #[test]
    fn unit_ball_is_invariant(
        u in prop::collection::vec(-1.0f64..=1.0, 48),
        t in 0.0f64..3.0,
    ) {
        let p = problem(1, 48, 12.0);
        let e = p.evolve(&Field::new(p.domain().clone(), u).unwrap(), t).unwrap();
        prop_assert!(e.sup_norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn equilibria_are_fixed_by_every_extended_time(
        c in prop::sample::select(vec![-1.0f64, 0.0, 1.0]),
        t in 0.0f64..2.0,
        s in -10.0f64..10.0,
    ) {
        let p = problem(1, 48, 12.0);
        let u = Field::constant(p.domain().clone(), c);
        let v = extended_apply(&p, &tp(&[t, s]), &u).unwrap();
        prop_assert_eq!(v.values(), u.values());
    }
}
