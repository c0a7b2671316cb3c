//! Masked lattices: builders, depth maps, deep components, descriptors.
use attractor_lab::elliptic::deep_components;
use attractor_lab::phase::{distance::depth_map, CellTag, GridDomain};

fn main() -> attractor_lab::Result<()> {
    let dumbbell = GridDomain::dumbbell(20.0, 4.0, 3, 0.25)?;
    println!(
        "dumbbell: {:?} cells, {} interior, {} boundary",
        dumbbell.shape(),
        dumbbell.count(CellTag::Interior),
        dumbbell.count(CellTag::Boundary)
    );
    let depth = depth_map(&dumbbell);
    let deepest = depth.iter().cloned().fold(0.0, f64::max);
    println!("deepest cell: {deepest:.2}");
    for d in [0.5, 2.0, 6.0] {
        let comps = deep_components(&dumbbell, d);
        let sizes: Vec<usize> = comps.iter().map(Vec::len).collect();
        println!("Omega_{d}: {} components {:?}", comps.len(), sizes);
    }

    let strip = GridDomain::strip(4.0, 8.0, 0.5, true)?;
    let desc = strip.descriptor();
    let back = GridDomain::from_descriptor(&desc)?;
    println!("periodic strip round trip: {}", back == strip);
    println!("content hash {}", &strip.content_hash()[..16]);
    Ok(())
}
