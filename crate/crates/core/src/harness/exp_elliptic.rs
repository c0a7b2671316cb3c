use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::Ctx;
use crate::elliptic::{
    attraction_profile_elliptic, equilibrium_set, interior_gradient_check, interpolate, plateau_assign,
    solve_elliptic, subharmonic_defect, BoundaryData, DomainSpec, EllipticConfig, EllipticProblem, EllipticSolution,
    Init, SolverOptions, CERTIFIED_RESIDUAL,
};
use crate::error::Result;
use crate::nonlinearity::NonlinearityKind;
use crate::phase::{CellTag, Field};

/// Residual `max |Δ_h u - f(u)|` recomputed from cell positions: neighbours
/// are found by locating `x ± h e_a`, not through the solver's stencil.
/// Bounded (non-periodic) domains only.
pub fn oracle_residual(p: &EllipticProblem, u: &Field) -> f64 {
    let dom = p.domain();
    let h = dom.spacing();
    let f = p.nonlinearity();
    let mut worst = 0.0f64;
    for c in 0..dom.len() {
        if dom.tag(c) != CellTag::Interior {
            continue;
        }
        let x = dom.position(c);
        let mut lap = 0.0;
        for a in 0..x.len() {
            for step in [-h, h] {
                let mut y = x.clone();
                y[a] += step;
                match dom.locate(&y) {
                    Some(n) if dom.tag(n) != CellTag::Exterior => lap += u.get(n) - u.get(c),
                    _ => return f64::INFINITY,
                }
            }
        }
        worst = worst.max((lap / (h * h) - f.eval(u.get(c))).abs());
    }
    worst
}

fn init_of(constant_guess: Option<f64>) -> Init {
    match constant_guess {
        Some(c) => Init::ConstantGuess(c),
        None => Init::HarmonicExtension,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnnulusParams {
    pub r_in: f64,
    pub r_out: f64,
    pub spacing: f64,
    #[serde(rename = "N")]
    pub n: u32,
    /// Boundary data `mean + sum a_k cos(k θ) + b_k sin(k θ)`.
    pub mean: f64,
    pub terms: Vec<[f64; 3]>,
    /// `null` starts from the harmonic extension.
    pub constant_guess: Option<f64>,
    pub profile_depths: Vec<f64>,
    pub plateau_depth: f64,
    pub profile_tol: f64,
    pub plateau_tol: f64,
    pub solver: SolverOptions,
}

impl Default for AnnulusParams {
    fn default() -> Self {
        AnnulusParams {
            r_in: 1.0,
            r_out: 40.0,
            spacing: 0.1,
            n: 2,
            mean: 1.0,
            terms: vec![[3.0, 1.5, 0.0]],
            constant_guess: Some(0.0),
            profile_depths: (0..=19).map(f64::from).collect(),
            plateau_depth: 15.0,
            profile_tol: 1e-3,
            plateau_tol: 1e-3,
            solver: SolverOptions::default(),
        }
    }
}

impl AnnulusParams {
    fn config(&self, spacing: f64) -> EllipticConfig {
        EllipticConfig {
            domain: DomainSpec::Annulus {
                r_in: self.r_in,
                r_out: self.r_out,
            },
            spacing,
            nonlinearity: NonlinearityKind::PlateauPoly { n: self.n },
            boundary_data: BoundaryData::Fourier {
                mean: self.mean,
                terms: self.terms.clone(),
            },
            solver: self.solver.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DumbbellParams {
    pub side: f64,
    pub corridor_length: f64,
    /// Corridor width in cells at `spacing`; refinement keeps the distance
    /// between the outer corridor cell centres.
    pub corridor_cells: usize,
    pub spacing: f64,
    #[serde(rename = "N")]
    pub n: u32,
    /// Boundary value `below` where the long-axis coordinate (axis 1) is
    /// less than `split`, `above` otherwise.
    pub split: f64,
    pub below: f64,
    pub above: f64,
    pub constant_guess: Option<f64>,
    pub profile_depths: Vec<f64>,
    pub plateau_depth: f64,
    pub profile_tol: f64,
    pub plateau_tol: f64,
    pub solver: SolverOptions,
}

impl Default for DumbbellParams {
    fn default() -> Self {
        DumbbellParams {
            side: 60.0,
            corridor_length: 10.0,
            corridor_cells: 3,
            spacing: 0.1,
            n: 2,
            split: 65.0,
            below: 0.0,
            above: 2.0,
            constant_guess: None,
            profile_depths: (0..=29).map(f64::from).collect(),
            plateau_depth: 20.0,
            profile_tol: 1e-3,
            plateau_tol: 1e-3,
            solver: SolverOptions::default(),
        }
    }
}

impl DumbbellParams {
    fn config(&self, refine: u32) -> EllipticConfig {
        let k = 1usize << refine;
        EllipticConfig {
            domain: DomainSpec::Dumbbell {
                side: self.side,
                corridor_length: self.corridor_length,
                corridor_cells: k * (self.corridor_cells.max(1) - 1) + 1,
            },
            spacing: self.spacing / k as f64,
            nonlinearity: NonlinearityKind::PlateauPoly { n: self.n },
            boundary_data: BoundaryData::Piecewise {
                axis: 1,
                split: self.split,
                below: self.below,
                above: self.above,
            },
            solver: self.solver.clone(),
        }
    }
}

fn certify(ctx: &mut Ctx, tag: &str, p: &EllipticProblem, sol: &EllipticSolution) -> f64 {
    let oracle = oracle_residual(p, &sol.field);
    ctx.check(
        &format!("{tag}certified"),
        sol.certificate.residual <= CERTIFIED_RESIDUAL && oracle <= CERTIFIED_RESIDUAL,
        format!(
            "solver residual {:.3e}, recomputed {:.3e}, {} iterations",
            sol.certificate.residual, oracle, sol.certificate.iters
        ),
    );
    oracle
}

struct PlateauCase<'a> {
    cfg: EllipticConfig,
    init: Init,
    profile_depths: &'a [f64],
    plateau_depth: f64,
    profile_tol: f64,
    plateau_tol: f64,
}

#[derive(Serialize)]
struct PlateauSummary {
    cells: usize,
    residual: f64,
    subharmonic_defect: f64,
    max_grad_deep: f64,
    plateau: crate::elliptic::PlateauAssignment,
}

/// Solve, write artifacts and check the profile; returns the plateau
/// assignment on the deep set.
fn plateau_case(ctx: &mut Ctx, case: PlateauCase) -> Result<crate::elliptic::PlateauAssignment> {
    ctx.json("problem.json", &case.cfg)?;
    let p = EllipticProblem::from_config(&case.cfg)?;
    let sol = solve_elliptic(&p, case.init)?;
    let residual = certify(ctx, "", &p, &sol);
    ctx.json("certificate.json", &sol.certificate)?;
    ctx.field("solution", &sol.field)?;

    let k = equilibrium_set(p.nonlinearity())?;
    let profile = attraction_profile_elliptic(&sol.field, &k, case.profile_depths)?;
    ctx.profile("profile.csv", &profile)?;
    ctx.check(
        "profile_nonincreasing",
        profile.is_nonincreasing(0.0),
        format!(
            "{} depth bands, {} skipped",
            profile.entries.len(),
            profile.skipped.len()
        ),
    );
    let at = profile.get(case.plateau_depth);
    ctx.check(
        "profile_small_at_depth",
        at.is_some_and(|v| v <= case.profile_tol),
        format!("profile at D={}: {:?} (limit {})", case.plateau_depth, at, case.profile_tol),
    );

    let plateau = plateau_assign(&sol.field, &k, case.plateau_depth, case.plateau_tol)?;
    let grad = interior_gradient_check(&sol.field, case.plateau_depth)?;
    ctx.json(
        "plateau.json",
        &PlateauSummary {
            cells: p.domain().len() - p.domain().count(CellTag::Exterior),
            residual,
            subharmonic_defect: subharmonic_defect(&sol.field),
            max_grad_deep: grad.max_grad,
            plateau: plateau.clone(),
        },
    )?;
    Ok(plateau)
}

pub(crate) fn run_annulus(p: &AnnulusParams, ctx: &mut Ctx) -> Result<()> {
    let plateau = plateau_case(
        ctx,
        PlateauCase {
            cfg: p.config(p.spacing),
            init: init_of(p.constant_guess),
            profile_depths: &p.profile_depths,
            plateau_depth: p.plateau_depth,
            profile_tol: p.profile_tol,
            plateau_tol: p.plateau_tol,
        },
    )?;
    ctx.check(
        "deep_set_connected",
        plateau.components.len() == 1,
        format!("{} components at D={}", plateau.components.len(), p.plateau_depth),
    );
    let resolved = plateau.resolved();
    ctx.check(
        "plateau_resolved",
        plateau.components.len() == 1 && resolved.len() == 1,
        format!("N_u = {resolved:?}"),
    );
    Ok(())
}

pub(crate) fn run_dumbbell(p: &DumbbellParams, ctx: &mut Ctx) -> Result<()> {
    let plateau = plateau_case(
        ctx,
        PlateauCase {
            cfg: p.config(0),
            init: init_of(p.constant_guess),
            profile_depths: &p.profile_depths,
            plateau_depth: p.plateau_depth,
            profile_tol: p.profile_tol,
            plateau_tol: p.plateau_tol,
        },
    )?;
    ctx.check(
        "two_components",
        plateau.components.len() == 2,
        format!("{} components at D={}", plateau.components.len(), p.plateau_depth),
    );
    let resolved = plateau.resolved();
    ctx.check(
        "each_component_resolved",
        plateau.components.len() == 2 && resolved.len() == 2,
        format!(
            "N_u per component {:?}{}",
            plateau.components.iter().map(|c| c.n_u).collect::<Vec<_>>(),
            if resolved.len() == 2 && resolved[0] != resolved[1] {
                " (different plateaus)"
            } else {
                ""
            }
        ),
    );
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SubharmonicParams {
    pub annulus: AnnulusParams,
    pub dumbbell: DumbbellParams,
    pub min_defect: f64,
    pub refine: bool,
}

impl Default for SubharmonicParams {
    fn default() -> Self {
        SubharmonicParams {
            annulus: AnnulusParams::default(),
            dumbbell: DumbbellParams::default(),
            min_defect: -1e-4,
            refine: true,
        }
    }
}

#[derive(Serialize)]
struct SubharmonicRow {
    case: &'static str,
    spacing: f64,
    cells: usize,
    residual: f64,
    defect: f64,
    /// Rounding level of the defect, `2 max|u| residual`.
    noise_floor: f64,
}

pub(crate) fn run_subharmonic(p: &SubharmonicParams, ctx: &mut Ctx) -> Result<()> {
    let cases: [(&'static str, EllipticConfig, EllipticConfig, Init); 2] = [
        (
            "annulus",
            p.annulus.config(p.annulus.spacing),
            p.annulus.config(p.annulus.spacing / 2.0),
            init_of(p.annulus.constant_guess),
        ),
        (
            "dumbbell",
            p.dumbbell.config(0),
            p.dumbbell.config(1),
            init_of(p.dumbbell.constant_guess),
        ),
    ];
    let mut rows = Vec::new();
    for (name, coarse_cfg, fine_cfg, init) in cases {
        let coarse = EllipticProblem::from_config(&coarse_cfg)?;
        let sol = solve_elliptic(&coarse, init)?;
        let res_c = certify(ctx, &format!("{name}_coarse_"), &coarse, &sol);
        let row_c = SubharmonicRow {
            case: name,
            spacing: coarse_cfg.spacing,
            cells: coarse.domain().len() - coarse.domain().count(CellTag::Exterior),
            residual: res_c,
            defect: subharmonic_defect(&sol.field),
            noise_floor: 2.0 * sol.field.sup_norm() * res_c,
        };
        ctx.check(
            &format!("{name}_defect_bounded"),
            row_c.defect >= p.min_defect,
            format!("defect {:.3e} at spacing {} (limit {})", row_c.defect, row_c.spacing, p.min_defect),
        );
        if p.refine {
            let fine = EllipticProblem::from_config(&fine_cfg)?;
            let guess = interpolate(&sol.field, Arc::clone(fine.domain()))?;
            let fsol = solve_elliptic(&fine, Init::Given(guess))?;
            let res_f = certify(ctx, &format!("{name}_fine_"), &fine, &fsol);
            let row_f = SubharmonicRow {
                case: name,
                spacing: fine_cfg.spacing,
                cells: fine.domain().len() - fine.domain().count(CellTag::Exterior),
                residual: res_f,
                defect: subharmonic_defect(&fsol.field),
                noise_floor: 2.0 * fsol.field.sup_norm() * res_f,
            };
            let (mc, mf) = (row_c.defect.abs(), row_f.defect.abs());
            ctx.check(
                &format!("{name}_defect_decreases"),
                row_f.defect >= p.min_defect && (mf <= mc || mf <= row_f.noise_floor),
                format!(
                    "|defect| {mc:.3e} -> {mf:.3e} (rounding level {:.3e})",
                    row_f.noise_floor
                ),
            );
            rows.push(row_c);
            rows.push(row_f);
        } else {
            rows.push(row_c);
        }
    }
    ctx.json("subharmonicity.json", &rows)?;
    Ok(())
}
