use std::f64::consts::PI;

use attractor_lab::engine::toys::{LinearContraction, RotationContraction};
use attractor_lab::engine::{
    attraction_profile, backward_extension, directional_estimate, hausdorff, omega_estimate,
    strict_invariance_defect, AttractorEstimate, DirectionSpec, OmegaOptions, Semigroup, Target,
};
use attractor_lab::harness::{hausdorff_to_unit_disk, log_polar_seeds};
use attractor_lab::phase::TimePoint;
use attractor_lab::Error;

fn tp(c: &[f64]) -> TimePoint {
    TimePoint::new(c.to_vec()).unwrap()
}

fn toy() -> RotationContraction {
    RotationContraction::new(3.0 * (1.0 + 1e-12)).unwrap()
}

fn seeds() -> Vec<Vec<f64>> {
    log_polar_seeds(3.0, 11.0, 0.07, 128)
}

fn lattice_disk_net(spacing: f64) -> AttractorEstimate<Vec<f64>> {
    let n = (1.0 / spacing).ceil() as i64;
    let mut points = Vec::new();
    for i in -n..=n {
        for j in -n..=n {
            let (x, y) = (i as f64 * spacing, j as f64 * spacing);
            if x.hypot(y) <= 1.0 {
                points.push(vec![x, y]);
            }
        }
    }
    let m = (2.0 * PI / spacing).ceil() as usize;
    for k in 0..m {
        let th = 2.0 * PI * k as f64 / m as f64;
        points.push(vec![th.cos(), th.sin()]);
    }
    AttractorEstimate {
        points,
        epsilon: 2.0 * spacing,
        depths_used: vec![],
        invariance_defects: vec![],
        invariance_defect: 0.0,
        stabilization: None,
        max_norm_by_depth: vec![],
        provenance: "square lattice of the unit disk".into(),
    }
}

#[test]
fn radial_flow_matches_logistic_closed_form() {
    // r^2 solves z' = 2 z (1 - z), integrated here with small Euler steps
    let (r0, t) = (2.5f64, 1.3);
    let mut z = r0 * r0;
    let n = 200_000;
    let dt = t / n as f64;
    for _ in 0..n {
        z += dt * 2.0 * z * (1.0 - z);
    }
    assert!((RotationContraction::radial(r0, t) - z.sqrt()).abs() < 1e-4);
}

#[test]
fn toy_omega_is_the_unit_disk() {
    let s = toy();
    let est = omega_estimate(&s, &seeds(), &[5.0, 6.0], 0.05, &OmegaOptions::default()).unwrap();
    let hd = hausdorff_to_unit_disk(&est.points, 0.004);
    assert!(hd <= 0.05, "Hausdorff {hd}");
    assert!(est.stabilization.unwrap() <= 0.05);
    assert!(est.invariance_defect <= 0.1);
    let m = est.max_norm_by_depth.last().unwrap().1;
    assert!(m <= 1.0 + 1e-4, "{m}");
}

#[test]
fn lattice_disk_net_is_strictly_invariant() {
    let eps = 0.05;
    let net = lattice_disk_net(eps / 2.0);
    let d = strict_invariance_defect(&net, &toy(), &tp(&[1.0, 0.7])).unwrap();
    assert!(d <= eps + 0.01, "defect {d}");
}

#[test]
fn pure_contraction_net_is_the_origin() {
    let s = LinearContraction::new(2, 2, 2.0).unwrap();
    let seeds: Vec<Vec<f64>> = (0..32)
        .map(|j| {
            let th = 2.0 * PI * j as f64 / 32.0;
            vec![2.0 * th.cos(), 2.0 * th.sin()]
        })
        .collect();
    let est = omega_estimate(&s, &seeds, &[8.0, 10.0], 0.01, &OmegaOptions::default()).unwrap();
    assert_eq!(est.points.len(), 1);
    assert!(est.points[0][0].hypot(est.points[0][1]) < 1e-7);
}

#[test]
fn linear_profile_is_r_exp_minus_two_d() {
    let s = LinearContraction::new(2, 1, 2.0).unwrap();
    let p = attraction_profile(&s, &[vec![2.0], vec![-1.0]], &Target::Points(vec![vec![0.0]]), &[1.0, 2.0, 3.0], None)
        .unwrap();
    for e in &p.entries {
        let exact = 2.0 * (-2.0 * e.depth).exp();
        assert!((e.sup_dist - exact).abs() <= 1e-12 * exact.max(1.0));
    }
    assert!((p.get(1.0).unwrap() - 0.2707).abs() < 1e-4);
    let (slope, _, _) = p.log_linear_fit().unwrap();
    assert!((slope + 2.0).abs() < 1e-9);
}

#[test]
fn directional_nets_recover_the_disk() {
    let s = toy();
    let eps = 0.05;
    let full = omega_estimate(&s, &seeds(), &[6.0], eps, &OmegaOptions::default()).unwrap();
    let mut nets = Vec::new();
    for l in [[1.0, 1.0], [2.0, 1.0]] {
        let dir = DirectionSpec::new(&l, s.arrow().cone()).unwrap();
        let est = directional_estimate(&s, &dir, &seeds(), &[6.0 / dir.kappa()], eps).unwrap();
        assert!(hausdorff_to_unit_disk(&est.points, 0.004) <= 2.0 * eps);
        assert!(hausdorff(&est.points, &full.points, |a, b| s.distance(a, b)) <= 2.0 * eps);
        nets.push(est.points);
    }
    assert!(hausdorff(&nets[0], &nets[1], |a, b| s.distance(a, b)) <= 2.0 * eps);
}

#[test]
fn backward_chain_from_the_circle() {
    let s = toy();
    let est = omega_estimate(&s, &seeds(), &[5.0, 6.0], 0.05, &OmegaOptions::default()).unwrap();
    let chain = backward_extension(&est, &s, &vec![1.0, 0.0], &tp(&[1.0, 0.0]), 5).unwrap();
    assert_eq!(chain.chain.len(), 6);
    assert!(chain.max_defect <= 0.1, "{}", chain.max_defect);
    for u in &chain.chain {
        assert!(u[0].hypot(u[1]) <= 1.0 + 0.05);
    }
}

#[test]
fn backward_chain_rejects_points_off_the_attractor() {
    let s = toy();
    let est = lattice_disk_net(0.025);
    match backward_extension(&est, &s, &vec![2.0, 0.0], &tp(&[1.0, 0.0]), 3) {
        Err(Error::NotOnAttractor { distance, limit }) => {
            assert!((distance - 1.0).abs() < 1e-9);
            assert!((limit - 0.1).abs() < 1e-12);
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        backward_extension(&est, &s, &vec![0.5, 0.0], &tp(&[0.0, 1.0]), 3),
        Err(Error::TimeOutsideCone(_))
    ));
}

#[test]
fn seeds_outside_the_bornology_are_rejected() {
    let s = RotationContraction::new(1.0).unwrap();
    assert!(matches!(
        omega_estimate(&s, &[vec![2.0, 0.0]], &[1.0], 0.1, &OmegaOptions::default()),
        Err(Error::NotInBornology(_))
    ));
}
