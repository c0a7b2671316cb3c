//! Driving the harness from code: list the registry, run one experiment.
use attractor_lab::harness::{list_experiments, run_experiment, ExperimentConfig};

fn main() -> attractor_lab::Result<()> {
    for e in list_experiments() {
        println!("{:<24} {}", e.name, e.description);
    }
    let out = std::env::temp_dir().join("attractor-lab-example");
    let cfg = ExperimentConfig::new("constant-exactness", 42).with_out_dir(&out);
    let report = run_experiment(&cfg)?;
    for a in &report.assertions {
        println!("{} {}: {}", if a.pass { "ok  " } else { "FAIL" }, a.name, a.detail);
    }
    for a in &report.artifacts {
        println!("{} {}", &a.sha256[..12], a.path);
    }
    Ok(())
}
