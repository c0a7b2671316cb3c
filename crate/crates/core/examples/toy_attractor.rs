//! Omega-limit estimate of the rotation-contraction system, whose attractor
//! is the closed unit disk.
use attractor_lab::engine::toys::RotationContraction;
use attractor_lab::engine::{backward_extension, omega_estimate, OmegaOptions};
use attractor_lab::harness::{hausdorff_to_unit_disk, log_polar_seeds};
use attractor_lab::phase::TimePoint;

fn main() -> attractor_lab::Result<()> {
    let sys = RotationContraction::new(3.0 + 1e-12)?;
    let seeds = log_polar_seeds(3.0, 9.0, 0.1, 96);
    let opts = OmegaOptions {
        invariance_times: vec![TimePoint::new(vec![1.0, 0.7])?],
        provenance: "log-polar ball of radius 3".into(),
    };
    let est = omega_estimate(&sys, &seeds, &[4.0, 5.0], 0.08, &opts)?;
    println!("{} seeds -> {} net points", seeds.len(), est.points.len());
    println!("stabilization {:?}", est.stabilization);
    println!("invariance defect {:.4}", est.invariance_defect);
    println!("Hausdorff to unit disk {:.4}", hausdorff_to_unit_disk(&est.points, 0.01));

    let chain = backward_extension(&est, &sys, &vec![0.5, 0.0], &TimePoint::new(vec![0.5, 0.0])?, 4)?;
    for (k, p) in chain.chain.iter().enumerate() {
        println!("  t=-{:.1}: |u| = {:.4}", 0.5 * k as f64, p[0].hypot(p[1]));
    }
    println!("max backward defect {:.4}", chain.max_defect);
    Ok(())
}
