use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Ctx;
use crate::elliptic::{residual_sup, solve_elliptic, EllipticProblem, Init};
use crate::engine::{
    attraction_profile, identity_defect, par_map, semigroup_law_defect, Semigroup, Target,
};
use crate::error::Result;
use crate::nonlinearity::Nonlinearity;
use crate::parabolic::{
    comparison_bound, dissipative_check, extended_apply, shift, ExtendedSemigroup, ParabolicProblem,
    ShiftSemigroup,
};
use crate::phase::{Field, GridDomain, TimePoint};

/// `y' = y - y^3` from `y0`, closed form.
pub(crate) fn logistic(y0: f64, t: f64) -> f64 {
    let e = (2.0 * t).exp();
    y0.signum() * (y0 * y0 * e / (1.0 + y0 * y0 * (e - 1.0))).sqrt()
}

/// i.i.d. uniform values in `[-r, r]` with one randomly placed cell at `±r`,
/// so the sup-norm is exactly `r`.
pub(crate) fn noise_seed(domain: &Arc<GridDomain>, r: f64, rng: &mut impl Rng) -> Field {
    let mut v: Vec<f64> = (0..domain.len()).map(|_| rng.gen_range(-r..=r)).collect();
    let peak = rng.gen_range(0..domain.len());
    v[peak] = if rng.gen::<bool>() { r } else { -r };
    Field::new(domain.clone(), v).expect("finite")
}

/// A few random low Fourier modes, scaled to sup-norm about `amp`.
fn smooth_seed(domain: &Arc<GridDomain>, amp: f64, rng: &mut impl Rng) -> Field {
    let len = domain.spacing() * domain.shape()[0] as f64;
    let modes: Vec<(Vec<f64>, f64, f64)> = (0..4)
        .map(|_| {
            let k: Vec<f64> = (0..domain.dim()).map(|_| rng.gen_range(-3i32..=3) as f64).collect();
            (k, rng.gen_range(-1.0..1.0), rng.gen_range(0.0..2.0 * PI))
        })
        .collect();
    Field::from_fn(domain.clone(), |x| {
        amp / 4.0
            * modes
                .iter()
                .map(|(k, a, ph)| {
                    let arg: f64 = k.iter().zip(x).map(|(k, x)| 2.0 * PI * k * x / len).sum();
                    a * (arg + ph).cos()
                })
                .sum::<f64>()
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OdeParams {
    pub grid: usize,
    #[serde(rename = "L")]
    pub length: f64,
    pub dt: f64,
    pub t: f64,
    pub tol: f64,
    pub small_seeds: usize,
    pub small_radius: f64,
    pub large_seeds: usize,
    pub large_radius: f64,
    /// Depths of the attraction profile toward the ball of radius `C_*(1)`.
    pub profile_depths: Vec<f64>,
    pub profile_seeds: usize,
}

impl Default for OdeParams {
    fn default() -> Self {
        OdeParams {
            grid: 1024,
            length: 32.0,
            dt: 0.01,
            t: 1.0,
            tol: 0.02,
            small_seeds: 20,
            small_radius: 10.0,
            large_seeds: 5,
            large_radius: 100.0,
            profile_depths: vec![1.0, 2.0, 3.0],
            profile_seeds: 4,
        }
    }
}

pub(crate) fn run_ode(p: &OdeParams, ctx: &mut Ctx) -> Result<()> {
    let domain = Arc::new(GridDomain::periodic_box(1, p.grid, p.length)?);
    let problem = ParabolicProblem::new(domain.clone(), Nonlinearity::cubic(), p.dt)?;
    let radii: Vec<f64> = std::iter::repeat(p.small_radius)
        .take(p.small_seeds)
        .chain(std::iter::repeat(p.large_radius).take(p.large_seeds))
        .collect();
    let seeds: Vec<Field> = radii
        .iter()
        .enumerate()
        .map(|(i, &r)| noise_seed(&domain, r, &mut ctx.rng(i as u64)))
        .collect();
    let report = dissipative_check(&problem, &seeds, p.t, p.tol)?;
    ctx.json("dissipative.json", &report)?;

    // the comparison ODE started far out approaches C_*(t) from below
    let oracle = logistic(1e8, p.t);
    ctx.check(
        "bound_matches_logistic_oracle",
        (report.bound - oracle).abs() <= 1e-6,
        format!("bound {:.8} oracle {:.8}", report.bound, oracle),
    );
    if p.t == 1.0 {
        ctx.check(
            "bound_value",
            (report.bound - 1.07541).abs() < 1e-5,
            format!("C_*(1) = {:.8}", report.bound),
        );
    }
    ctx.check(
        "absorbed",
        report.pass,
        format!(
            "max sup-norm {:.8} <= {:.8} + {} over {} seeds (R = {})",
            report.max_norm,
            report.bound,
            p.tol,
            seeds.len(),
            report.r
        ),
    );

    if !p.profile_depths.is_empty() && p.profile_seeds > 0 {
        let s = ExtendedSemigroup::new(problem, report.r)?;
        let pick: Vec<Field> = seeds.iter().rev().take(p.profile_seeds).cloned().collect();
        let c1 = comparison_bound(p.profile_depths[0]);
        let profile = attraction_profile(&s, &pick, &Target::NormBall(c1), &p.profile_depths, None)?;
        ctx.profile("absorption_profile.csv", &profile)?;
        let worst = profile.entries.iter().map(|e| e.sup_dist).fold(0.0, f64::max);
        ctx.check(
            "profile_inside_ball",
            worst <= p.tol,
            format!("largest excess over radius {c1:.6}: {worst:.3e}"),
        );
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExactnessParams {
    pub grid: usize,
    #[serde(rename = "L")]
    pub length: f64,
    pub grid_2d: usize,
    pub dt: f64,
    pub y0: f64,
    pub times: Vec<f64>,
    pub tol: f64,
    /// Annulus used for the constant elliptic solves.
    pub r_in: f64,
    pub r_out: f64,
    pub spacing: f64,
    /// Plateau levels used as constant boundary data.
    pub levels: Vec<f64>,
}

impl Default for ExactnessParams {
    fn default() -> Self {
        ExactnessParams {
            grid: 1024,
            length: 32.0,
            grid_2d: 64,
            dt: 0.01,
            y0: 3.0,
            times: vec![0.5, 1.0, 2.0],
            tol: 1e-6,
            r_in: 1.0,
            r_out: 8.0,
            spacing: 0.1,
            levels: vec![0.0, 1.0, 2.0],
        }
    }
}

#[derive(Serialize)]
struct ConstantRow {
    dim: usize,
    t: f64,
    value: f64,
    exact: f64,
    err: f64,
}

#[derive(Serialize)]
struct EllipticRow {
    k: f64,
    residual: f64,
    max_dev: f64,
    iters: usize,
}

pub(crate) fn run_exactness(p: &ExactnessParams, ctx: &mut Ctx) -> Result<()> {
    let mut rows = Vec::new();
    for (dim, n) in [(1, p.grid), (2, p.grid_2d)] {
        let domain = Arc::new(GridDomain::periodic_box(dim, n, p.length)?);
        let problem = ParabolicProblem::new(domain.clone(), Nonlinearity::cubic(), p.dt)?;
        let u0 = Field::constant(domain, p.y0);
        for &t in &p.times {
            let u = problem.evolve(&u0, t)?;
            let exact = logistic(p.y0, t);
            let err = u.values().iter().map(|v| (v - exact).abs()).fold(0.0, f64::max);
            rows.push(ConstantRow {
                dim,
                t,
                value: u.get(0),
                exact,
                err,
            });
        }
    }
    let worst = rows.iter().map(|r| r.err).fold(0.0, f64::max);
    ctx.json("constant_evolution.json", &rows)?;
    ctx.check(
        "logistic_match",
        worst <= p.tol,
        format!("max |u - y(t)| = {worst:.3e} over {} cases", rows.len()),
    );

    let domain = Arc::new(GridDomain::annulus(p.r_in, p.r_out, p.spacing)?);
    let mut erows = Vec::new();
    for &k in &p.levels {
        let problem = EllipticProblem::new(domain.clone(), Nonlinearity::plateau(2), |_| k)?;
        let sol = solve_elliptic(&problem, Init::HarmonicExtension)?;
        let max_dev = sol
            .field
            .values()
            .iter()
            .zip(domain.mask())
            .filter(|(_, t)| **t != crate::phase::CellTag::Exterior)
            .map(|(v, _)| (v - k).abs())
            .fold(0.0, f64::max);
        erows.push(EllipticRow {
            k,
            residual: residual_sup(&problem, &sol.field)?,
            max_dev,
            iters: sol.certificate.iters,
        });
    }
    ctx.json("constant_elliptic.json", &erows)?;
    let ok = erows.iter().all(|r| r.residual == 0.0 && r.max_dev == 0.0);
    ctx.check(
        "elliptic_constant_exact",
        ok,
        erows
            .iter()
            .map(|r| format!("k={}: residual {:e}, max|u-k| {:e}", r.k, r.residual, r.max_dev))
            .collect::<Vec<_>>()
            .join("; "),
    );
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LawParams {
    pub grid_1d: usize,
    pub grid_2d: usize,
    #[serde(rename = "L")]
    pub length: f64,
    pub dt: f64,
    pub t: f64,
    pub fields: usize,
    pub amplitude: f64,
    /// Lattice shifts (cells) used for the commutation check; 1D uses the
    /// first component.
    pub shifts: Vec<[i64; 2]>,
    /// Split times `(h1, h2)` for the extended law, in `(t, shift)` form;
    /// shifts are in cells.
    pub splits: Vec<[f64; 6]>,
    pub commutation_tol: f64,
    pub law_tol: f64,
}

impl Default for LawParams {
    fn default() -> Self {
        LawParams {
            grid_1d: 256,
            grid_2d: 48,
            length: 16.0,
            dt: 0.01,
            t: 0.5,
            fields: 3,
            amplitude: 2.0,
            shifts: vec![[1, 0], [7, -3], [-20, 11]],
            splits: vec![[0.3, 2.0, -1.0, 0.2, 5.0, 3.0], [0.5, 0.0, 0.0, 0.5, 1.0, 1.0], [0.0, 4.0, 4.0, 1.0, 0.0, 0.0]],
            commutation_tol: 1e-12,
            law_tol: 1e-8,
        }
    }
}

#[derive(Serialize)]
struct LawRow {
    dim: usize,
    field: usize,
    kind: &'static str,
    h: Vec<f64>,
    defect: f64,
}

pub(crate) fn run_law(p: &LawParams, ctx: &mut Ctx) -> Result<()> {
    let mut rows = Vec::new();
    for (dim, n) in [(1usize, p.grid_1d), (2, p.grid_2d)] {
        let domain = Arc::new(GridDomain::periodic_box(dim, n, p.length)?);
        let h = domain.spacing();
        let problem = ParabolicProblem::new(domain.clone(), Nonlinearity::cubic(), p.dt)?;
        let fields: Vec<Field> = (0..p.fields)
            .map(|i| smooth_seed(&domain, p.amplitude, &mut ctx.rng(100 * dim as u64 + i as u64)))
            .collect();
        let ext = ExtendedSemigroup::new(problem.clone(), f64::INFINITY)?;
        let shifts = ShiftSemigroup::new(domain.clone())?;
        for (fi, u) in fields.iter().enumerate() {
            let evolved = problem.evolve(u, p.t)?;
            let commute = par_map(&p.shifts, |s| -> Result<(Vec<i64>, f64)> {
                let s = s[..dim].to_vec();
                let a = problem.evolve(&shift(u, &s)?, p.t)?;
                let b = shift(&evolved, &s)?;
                Ok((s, a.sup_distance(&b)?))
            });
            for r in commute {
                let (s, d) = r?;
                rows.push(LawRow {
                    dim,
                    field: fi,
                    kind: "commutation",
                    h: s.iter().map(|&k| k as f64).collect(),
                    defect: d,
                });
            }
            for sp in &p.splits {
                let tp = |t: f64, s: &[f64]| -> Result<TimePoint> {
                    let mut c = vec![t];
                    c.extend(s[..dim].iter().map(|k| k * h));
                    TimePoint::new(c)
                };
                let h1 = tp(sp[0], &sp[1..3])?;
                let h2 = tp(sp[3], &sp[4..6])?;
                let joint = extended_apply(ext.problem(), &(&h1 + &h2), u)?;
                let split = extended_apply(ext.problem(), &h1, &extended_apply(ext.problem(), &h2, u)?)?;
                rows.push(LawRow {
                    dim,
                    field: fi,
                    kind: "extended_law",
                    h: h1.coords().iter().chain(h2.coords()).copied().collect(),
                    defect: joint.sup_distance(&split)?.max(semigroup_law_defect(&ext, &h1, &h2, u)?),
                });
                let s1 = TimePoint::new(h1.coords()[1..].to_vec())?;
                let s2 = TimePoint::new(h2.coords()[1..].to_vec())?;
                rows.push(LawRow {
                    dim,
                    field: fi,
                    kind: "shift_law",
                    h: s1.coords().iter().chain(s2.coords()).copied().collect(),
                    defect: semigroup_law_defect(&shifts, &s1, &s2, u)?,
                });
            }
            rows.push(LawRow {
                dim,
                field: fi,
                kind: "identity",
                h: vec![0.0; dim + 1],
                defect: identity_defect(&ext, u)?.max(ext.distance(&ext.apply(&TimePoint::zero(dim + 1), u)?, u)),
            });
        }
    }
    ctx.json("semigroup_law.json", &rows)?;
    let worst = |kind: &str| {
        rows.iter()
            .filter(|r| r.kind == kind)
            .map(|r| r.defect)
            .fold(0.0, f64::max)
    };
    let (c, l, s, i) = (
        worst("commutation"),
        worst("extended_law"),
        worst("shift_law"),
        worst("identity"),
    );
    ctx.check(
        "shift_evolve_commute",
        c <= p.commutation_tol,
        format!("max sup-norm commutation defect {c:.3e}"),
    );
    ctx.check("extended_law", l <= p.law_tol, format!("max law defect {l:.3e}"));
    ctx.check("shift_group_law", s == 0.0, format!("max shift law defect {s:e}"));
    ctx.check("identity", i == 0.0, format!("max identity defect {i:e}"));
    Ok(())
}
