//! Attraction profile of the linear contraction `e^{-(h1+h2)} x` toward the
//! origin, written as CSV plus a fitted-slope sidecar.
use attractor_lab::engine::toys::LinearContraction;
use attractor_lab::engine::{attraction_profile, Target};
use attractor_lab::harness::emit_profile_plotdata;

fn main() -> attractor_lab::Result<()> {
    let s = LinearContraction::new(2, 3, 2.0)?;
    let seeds = vec![vec![2.0, 0.0, 0.0], vec![0.0, -1.0, 1.0], vec![0.3, 0.3, 0.3]];
    let profile = attraction_profile(&s, &seeds, &Target::Points(vec![vec![0.0; 3]]), &[1.0, 2.0, 3.0, 4.0], None)?;
    print!("{}", profile.to_csv());
    if let Some((slope, _, r2)) = profile.log_linear_fit() {
        println!("slope {slope:.4} (exact -2), r2 {r2:.6}");
    }
    let dir = std::env::temp_dir().join("attractor-lab-profile");
    std::fs::create_dir_all(&dir)?;
    let [csv, json] = emit_profile_plotdata(&profile, &dir.join("linear.csv"))?;
    println!("wrote {} and {}", csv.display(), json.display());
    Ok(())
}
