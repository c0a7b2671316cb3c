use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::plane::PlaneIndex;
use super::Ctx;
use crate::engine::toys::{LinearContraction, RotationContraction};
use crate::engine::{
    attraction_profile, backward_extension, directional_estimate, hausdorff, omega_estimate, AttractorEstimate,
    DirectionSpec, OmegaOptions, Semigroup, Target,
};
use crate::error::Result;
use crate::phase::TimePoint;

const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

/// Sample of the closed ball of radius `radius` in log-polar layout: the
/// origin plus rings of radius `e^{-s}` for `s` from `-ln(radius)` to
/// `s_max` in steps of `ds`, each with `angles` points rotated by the golden
/// angle from the previous ring.
pub fn log_polar_seeds(radius: f64, s_max: f64, ds: f64, angles: usize) -> Vec<Vec<f64>> {
    let mut seeds = vec![vec![0.0, 0.0]];
    let s0 = -radius.ln();
    let rings = ((s_max - s0) / ds).floor() as usize + 1;
    for k in 0..rings {
        let r = radius * (-(k as f64) * ds).exp();
        let off = k as f64 * GOLDEN_ANGLE;
        for j in 0..angles {
            let th = 2.0 * PI * j as f64 / angles as f64 + off;
            seeds.push(vec![r * th.cos(), r * th.sin()]);
        }
    }
    seeds
}

/// Hausdorff distance from a planar point set to the closed unit disk,
/// sampling the disk on a square lattice of the given spacing plus the
/// boundary circle at the same resolution.
pub fn hausdorff_to_unit_disk(points: &[Vec<f64>], spacing: f64) -> f64 {
    let outward = points
        .iter()
        .map(|p| (p[0].hypot(p[1]) - 1.0).max(0.0))
        .fold(0.0, f64::max);
    let index = PlaneIndex::new(points, 0.02);
    let n = (1.0 / spacing).ceil() as i64;
    let mut inward = 0.0f64;
    for i in -n..=n {
        for j in -n..=n {
            let (x, y) = (i as f64 * spacing, j as f64 * spacing);
            if x.hypot(y) <= 1.0 {
                inward = inward.max(index.nearest(x, y));
            }
        }
    }
    let m = (2.0 * PI / spacing).ceil() as usize;
    for k in 0..m {
        let th = 2.0 * PI * k as f64 / m as f64;
        inward = inward.max(index.nearest(th.cos(), th.sin()));
    }
    outward.max(inward)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SeedLayout {
    pub radius: f64,
    pub s_max: f64,
    pub ds: f64,
    pub angles: usize,
}

impl Default for SeedLayout {
    fn default() -> Self {
        SeedLayout {
            radius: 3.0,
            s_max: 11.0,
            ds: 0.07,
            angles: 128,
        }
    }
}

impl SeedLayout {
    fn seeds(&self) -> Vec<Vec<f64>> {
        log_polar_seeds(self.radius, self.s_max, self.ds, self.angles)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToyParams {
    pub seeds: SeedLayout,
    pub eps: f64,
    pub depths: Vec<f64>,
    pub invariance_time: [f64; 2],
    pub disk_tol: f64,
    pub oracle_spacing: f64,
    pub backward_steps: usize,
    pub linear_radius: f64,
    pub linear_depths: Vec<f64>,
    pub linear_tol: f64,
}

impl Default for ToyParams {
    fn default() -> Self {
        ToyParams {
            seeds: SeedLayout::default(),
            eps: 0.05,
            depths: vec![5.0, 6.0],
            invariance_time: [1.0, 0.7],
            disk_tol: 0.05,
            oracle_spacing: 0.004,
            backward_steps: 6,
            linear_radius: 2.0,
            linear_depths: vec![1.0, 2.0, 3.0],
            linear_tol: 0.01,
        }
    }
}

#[derive(Serialize)]
struct ToySummary {
    seeds: usize,
    net_points: usize,
    eps: f64,
    depths: Vec<f64>,
    hausdorff_to_disk: f64,
    stabilization: Option<f64>,
    invariance_time: Vec<f64>,
    invariance_defect: f64,
    max_norm_by_depth: Vec<(f64, f64)>,
    backward_defect: f64,
    backward_chain: Vec<Vec<f64>>,
}

fn net_csv(a: &AttractorEstimate<Vec<f64>>) -> String {
    let mut s = String::from("x,y\n");
    for p in &a.points {
        s.push_str(&format!("{:.8e},{:.8e}\n", p[0], p[1]));
    }
    s
}

// the bornology bound allows for rounding in the polar seed coordinates
pub(crate) fn run_toy(p: &ToyParams, ctx: &mut Ctx) -> Result<()> {
    let sys = RotationContraction::new(p.seeds.radius * (1.0 + 1e-12))?;
    let seeds = p.seeds.seeds();
    let h_inv = TimePoint::new(p.invariance_time.to_vec())?;
    let opts = OmegaOptions {
        invariance_times: vec![h_inv.clone()],
        provenance: format!("log-polar sample of the ball of radius {}", p.seeds.radius),
    };
    let est = omega_estimate(&sys, &seeds, &p.depths, p.eps, &opts)?;
    let hd = hausdorff_to_unit_disk(&est.points, p.oracle_spacing);

    // walk backwards from an interior point toward the origin
    let chain = backward_extension(&est, &sys, &vec![0.6, 0.0], &TimePoint::new(vec![0.5, 0.3])?, p.backward_steps)?;

    ctx.text("toy_net.csv", &net_csv(&est))?;
    ctx.json(
        "toy_attractor.json",
        &ToySummary {
            seeds: seeds.len(),
            net_points: est.points.len(),
            eps: p.eps,
            depths: p.depths.clone(),
            hausdorff_to_disk: hd,
            stabilization: est.stabilization,
            invariance_time: h_inv.coords().to_vec(),
            invariance_defect: est.invariance_defect,
            max_norm_by_depth: est.max_norm_by_depth.clone(),
            backward_defect: chain.max_defect,
            backward_chain: chain.chain.clone(),
        },
    )?;
    ctx.check(
        "omega_near_unit_disk",
        hd <= p.disk_tol,
        format!("Hausdorff to the closed unit disk {hd:.4} ({} net points)", est.points.len()),
    );
    ctx.check(
        "strict_invariance",
        est.invariance_defect <= 2.0 * p.eps,
        format!("defect {:.4} at h={:?} (limit {})", est.invariance_defect, p.invariance_time, 2.0 * p.eps),
    );
    ctx.check(
        "backward_extension",
        chain.max_defect <= 2.0 * p.eps,
        format!("max one-step defect {:.4} over {} steps", chain.max_defect, p.backward_steps),
    );

    // linear contraction e^{-(h1+h2)} x from the sphere of radius R: the
    // worst probe time at depth D is (D, D), giving R e^{-2D}
    let lin = LinearContraction::new(2, 2, p.linear_radius)?;
    let lin_seeds: Vec<Vec<f64>> = std::iter::once(vec![0.0, 0.0])
        .chain((0..64).map(|j| {
            let th = 2.0 * PI * j as f64 / 64.0;
            let r = if j % 2 == 0 { p.linear_radius } else { 0.5 * p.linear_radius };
            vec![r * th.cos(), r * th.sin()]
        }))
        .collect();
    let profile = attraction_profile(&lin, &lin_seeds, &Target::Points(vec![vec![0.0, 0.0]]), &p.linear_depths, None)?;
    ctx.profile("linear_profile.csv", &profile)?;
    let worst_rel = profile
        .entries
        .iter()
        .map(|e| {
            let exact = p.linear_radius * (-2.0 * e.depth).exp();
            (e.sup_dist - exact).abs() / exact
        })
        .fold(0.0, f64::max);
    ctx.check(
        "linear_profile",
        worst_rel <= p.linear_tol,
        format!("max relative error against R e^(-2D): {worst_rel:.3e}"),
    );
    if let Some((slope, _, r2)) = profile.log_linear_fit() {
        ctx.check(
            "linear_profile_slope",
            (slope + 2.0).abs() <= 0.01,
            format!("fitted slope {slope:.5}, r2 {r2:.6}"),
        );
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DirectionalParams {
    pub seeds: SeedLayout,
    pub eps: f64,
    /// Interior directions `(t, s)`; normalized internally.
    pub directions: Vec<[f64; 2]>,
    /// Each direction is probed at `tau = time_depth / kappa`, so that the
    /// evolution time matches the full net's depth.
    pub time_depth: f64,
}

impl Default for DirectionalParams {
    fn default() -> Self {
        DirectionalParams {
            seeds: SeedLayout::default(),
            eps: 0.05,
            directions: vec![[1.0, 1.0], [2.0, 1.0], [1.0, -1.0], [1.0, 3.0], [3.0, -2.0]],
            time_depth: 6.0,
        }
    }
}

#[derive(Serialize)]
struct DirectionRow {
    id: String,
    kappa: f64,
    tau: f64,
    net_points: usize,
    vs_full: f64,
    invariance_defect: f64,
}

#[derive(Serialize)]
struct DirectionalSummary {
    eps: f64,
    full_net_points: usize,
    directions: Vec<DirectionRow>,
    /// `[i, j, Hausdorff]` for every pair of directions.
    pairwise: Vec<(usize, usize, f64)>,
}

pub(crate) fn run_directional(p: &DirectionalParams, ctx: &mut Ctx) -> Result<()> {
    let sys = RotationContraction::new(p.seeds.radius * (1.0 + 1e-12))?;
    let seeds = p.seeds.seeds();
    let full = omega_estimate(&sys, &seeds, &[p.time_depth], p.eps, &OmegaOptions::default())?;
    let d = |a: &Vec<f64>, b: &Vec<f64>| sys.distance(a, b);
    let mut nets = Vec::new();
    let mut rows = Vec::new();
    for l in &p.directions {
        let dir = DirectionSpec::new(l, sys.arrow().cone())?;
        let tau = p.time_depth / dir.kappa();
        let est = directional_estimate(&sys, &dir, &seeds, &[tau], p.eps)?;
        rows.push(DirectionRow {
            id: dir.id(),
            kappa: dir.kappa(),
            tau,
            net_points: est.points.len(),
            vs_full: hausdorff(&est.points, &full.points, d),
            invariance_defect: est.invariance_defect,
        });
        nets.push(est.points);
    }
    let mut pairwise = Vec::new();
    for i in 0..nets.len() {
        for j in i + 1..nets.len() {
            pairwise.push((i, j, hausdorff(&nets[i], &nets[j], d)));
        }
    }
    let limit = 2.0 * p.eps;
    let worst_pair = pairwise.iter().map(|x| x.2).fold(0.0, f64::max);
    let worst_full = rows.iter().map(|r| r.vs_full).fold(0.0, f64::max);
    ctx.check(
        "enough_directions",
        rows.len() >= 4,
        format!("{} interior directions", rows.len()),
    );
    ctx.check(
        "pairwise_agreement",
        worst_pair <= limit,
        format!("max pairwise Hausdorff {worst_pair:.4} (limit {limit})"),
    );
    ctx.check(
        "agreement_with_full_net",
        worst_full <= limit,
        format!("max Hausdorff to the full net {worst_full:.4} (limit {limit})"),
    );
    ctx.json(
        "directional.json",
        &DirectionalSummary {
            eps: p.eps,
            full_net_points: full.points.len(),
            directions: rows,
            pairwise,
        },
    )?;
    Ok(())
}
