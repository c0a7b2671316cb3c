use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::problem::EllipticProblem;
use super::solver::Stencil;
use crate::engine::{check_in_cone, field_key, FieldDistance, RateProfile, Semigroup};
use crate::error::{Error, Result};
use crate::nonlinearity::Nonlinearity;
use crate::parabolic::shift;
use crate::phase::distance::depth_map;
use crate::phase::{ball_offsets, Bornology, CellTag, Cone, Field, GridDomain, LocMetric, TimeArrow, TimePoint};

/// Real zeros of `f`: the constant solutions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumSet {
    pub values: Vec<f64>,
}

impl EquilibriumSet {
    pub fn nearest(&self, v: f64) -> Option<f64> {
        self.values
            .iter()
            .copied()
            .min_by(|a, b| (a - v).abs().total_cmp(&(b - v).abs()))
    }
}

pub fn equilibrium_set(f: &Nonlinearity) -> Result<EquilibriumSet> {
    let values = f.zeros()?;
    if let Some(v) = values.iter().find(|&&v| f.eval(v).abs() > 1e-12) {
        return Err(Error::UnsupportedNonlinearity(format!("root {v} does not evaluate to zero")));
    }
    Ok(EquilibriumSet { values })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientReport {
    #[serde(rename = "D")]
    pub depth: f64,
    pub max_grad: f64,
    pub cells: usize,
}

/// Largest centered-difference gradient over cells of depth at least `d`.
pub fn interior_gradient_check(u: &Field, d: f64) -> Result<GradientReport> {
    let depth = depth_map(u.domain());
    let keep = |c: usize| depth[c] >= d;
    let cells = (0..depth.len()).filter(|&c| keep(c)).count();
    if cells == 0 {
        return Err(Error::EmptyRegion(format!("no cell of depth >= {d}")));
    }
    Ok(GradientReport {
        depth: d,
        max_grad: u.max_gradient(keep),
        cells,
    })
}

/// Windowed attraction profile: for each `D`, the sup over cells `x` with
/// depth in `[D, D+1)` of `min_k sup_{B_1(x)} |u - k|`, where `B_1(x)` is the
/// discrete ball of `ceil(1/h)` cells around `x` restricted to non-exterior
/// cells. Depth bands without cells are skipped and listed in `skipped`.
pub fn attraction_profile_elliptic(u: &Field, k: &EquilibriumSet, depths: &[f64]) -> Result<RateProfile> {
    if k.values.is_empty() {
        return Err(Error::InvalidArgument("empty equilibrium set".into()));
    }
    let dom = u.domain();
    let depth = depth_map(dom);
    let radius = (1.0 / dom.spacing() - 1e-9).ceil();
    let offsets = ball_offsets(dom.dim(), radius);
    let mut profile = RateProfile::new(format!("constants {:?}", k.values));
    let mut idx = vec![0; dom.dim()];
    for &d in depths {
        let mut sup: Option<f64> = None;
        for c in 0..dom.len() {
            let dc = depth[c];
            if !(dc >= d && dc < d + 1.0) {
                continue;
            }
            dom.unravel_into(c, &mut idx);
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for off in &offsets {
                if let Some(n) = dom.offset_cell(&idx, off) {
                    if dom.tag(n) != CellTag::Exterior {
                        lo = lo.min(u.get(n));
                        hi = hi.max(u.get(n));
                    }
                }
            }
            let best = k
                .values
                .iter()
                .map(|kv| (hi - kv).max(kv - lo))
                .fold(f64::INFINITY, f64::min);
            sup = Some(sup.map_or(best, |s: f64| s.max(best)));
        }
        match sup {
            Some(s) => profile.push(d, s, None),
            None => profile.skipped.push(d),
        }
    }
    if profile.is_empty() {
        return Err(Error::EmptyRegion(format!("no cells in any depth band of {depths:?}")));
    }
    Ok(profile)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlateauComponent {
    pub id: usize,
    pub size: usize,
    /// Resolved plateau value, `None` when unresolved.
    #[serde(rename = "N_u")]
    pub n_u: Option<i64>,
    /// Sup of `|u - N_u|` on the component; for unresolved components the
    /// smallest such sup over the equilibria.
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlateauAssignment {
    #[serde(rename = "D")]
    pub depth: f64,
    pub tol: f64,
    pub components: Vec<PlateauComponent>,
}

impl PlateauAssignment {
    pub fn resolved(&self) -> Vec<i64> {
        self.components.iter().filter_map(|c| c.n_u).collect()
    }
}

/// Connected components of `Omega_D` (cells of depth greater than `d`, joined
/// across faces), each labelled with its cells in increasing order.
pub fn deep_components(domain: &GridDomain, d: f64) -> Vec<Vec<usize>> {
    let depth = depth_map(domain);
    let inside: Vec<bool> = depth.iter().map(|&x| x > d).collect();
    let mut label = vec![false; domain.len()];
    let mut out = Vec::new();
    let mut idx = vec![0; domain.dim()];
    for start in 0..domain.len() {
        if !inside[start] || label[start] {
            continue;
        }
        label[start] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            domain.unravel_into(c, &mut idx);
            for a in 0..domain.dim() {
                for step in [-1, 1] {
                    if let Some(n) = domain.neighbor(c, &idx, a, step) {
                        if inside[n] && !label[n] {
                            label[n] = true;
                            comp.push(n);
                            queue.push_back(n);
                        }
                    }
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Assigns each component of `Omega_D` the unique equilibrium within `tol`
/// of `u` on the whole component, or leaves it unresolved.
pub fn plateau_assign(u: &Field, k: &EquilibriumSet, d: f64, tol: f64) -> Result<PlateauAssignment> {
    let comps = deep_components(u.domain(), d);
    if comps.is_empty() {
        return Err(Error::EmptyRegion(format!("Omega_D is empty for D = {d}")));
    }
    let components = comps
        .iter()
        .enumerate()
        .map(|(id, cells)| {
            let devs: Vec<f64> = k
                .values
                .iter()
                .map(|kv| cells.iter().map(|&c| (u.get(c) - kv).abs()).fold(0.0, f64::max))
                .collect();
            let within: Vec<usize> = (0..devs.len()).filter(|&i| devs[i] <= tol).collect();
            let (n_u, deviation) = match within.as_slice() {
                [i] => (Some(k.values[*i].round() as i64), devs[*i]),
                _ => (None, devs.iter().copied().fold(f64::INFINITY, f64::min)),
            };
            PlateauComponent {
                id,
                size: cells.len(),
                n_u,
                deviation,
            }
        })
        .collect();
    Ok(PlateauAssignment {
        depth: d,
        tol,
        components,
    })
}

/// Minimum of `Δ_h (u^2)` over interior cells of depth at least 2.
///
/// Evaluated as `sum_n (u_n - u)^2 / h^2 + 2 u Δ_h u`, which equals the
/// five-point Laplacian of `u^2` and avoids cancellation on plateaus.
/// Returns 0 when no cell qualifies.
pub fn subharmonic_defect(u: &Field) -> f64 {
    let dom = u.domain();
    let depth = depth_map(dom);
    let st = Stencil::new(dom);
    let inv_h2 = 1.0 / (dom.spacing() * dom.spacing());
    let vals = u.values();
    let mut m = f64::INFINITY;
    for (i, &c) in st.cells.iter().enumerate() {
        if !(depth[c] >= 2.0) {
            continue;
        }
        let uc = vals[c];
        let sq: f64 = st.neighbors(i).iter().map(|&n| (vals[n] - uc) * (vals[n] - uc)).sum();
        let v = sq * inv_h2 + 2.0 * uc * st.laplacian(vals, i);
        m = m.min(v);
    }
    if m.is_finite() {
        m
    } else {
        0.0
    }
}

/// Residual of `u o T(s)` (with `(u o T(s))(x) = u(x + s)`) over interior
/// cells `x` whose shift `x + s` is interior. Lattice shifts leaving the box
/// along a non-periodic axis count as leaving the domain.
pub fn trajectory_shift_closure_check(p: &EllipticProblem, u: &Field, s: &[i64]) -> Result<f64> {
    let dom = p.domain();
    if **u.domain() != **dom {
        return Err(Error::DomainMismatch);
    }
    if s.len() != dom.dim() {
        return Err(Error::DimensionMismatch {
            expected: dom.dim(),
            got: s.len(),
        });
    }
    let mut idx = vec![0; dom.dim()];
    let mut target = vec![usize::MAX; dom.len()];
    for c in 0..dom.len() {
        if dom.tag(c) == CellTag::Exterior {
            continue;
        }
        dom.unravel_into(c, &mut idx);
        match dom.offset_cell(&idx, s) {
            Some(t) if dom.tag(t) != CellTag::Exterior => target[c] = t,
            _ => return Err(Error::NotSemiInvariant(s.to_vec())),
        }
    }
    let f = p.nonlinearity();
    let h2 = dom.spacing() * dom.spacing();
    let mut worst = 0.0f64;
    for c in 0..dom.len() {
        if dom.tag(c) != CellTag::Interior || dom.tag(target[c]) != CellTag::Interior {
            continue;
        }
        dom.unravel_into(c, &mut idx);
        let v = |cell: usize| u.get(target[cell]);
        let vc = v(c);
        let mut lap = 0.0;
        for a in 0..dom.dim() {
            for step in [-1, 1] {
                let n = dom.neighbor(c, &idx, a, step).expect("interior cells have all neighbors");
                lap += v(n) - vc;
            }
        }
        worst = worst.max((lap / h2 - f.eval(vc)).abs());
    }
    Ok(worst)
}

/// Translations along the periodic axis of a strip acting on solutions of an
/// elliptic problem posed there, over `C = R_+`.
pub struct TrajectoryShift {
    problem: EllipticProblem,
    axis: usize,
    arrow: TimeArrow,
    bornology: Bornology,
    metric: FieldDistance,
}

impl TrajectoryShift {
    /// `axis` must be periodic; members of the bornology are certified
    /// solutions of `problem` with sup-norm at most `norm_bound`.
    pub fn new(problem: EllipticProblem, axis: usize, norm_bound: f64, residual_tol: f64) -> Result<Self> {
        let dom = problem.domain().clone();
        if axis >= dom.dim() || !dom.periodic()[axis] {
            return Err(Error::NonPeriodicAxis(axis));
        }
        Ok(TrajectoryShift {
            metric: FieldDistance::Loc(LocMetric::centered_deepest(dom)?),
            problem,
            axis,
            arrow: TimeArrow::whole_cone(Cone::orthant_product(1, 0)?),
            bornology: Bornology::solutions_of("trajectory-shift", norm_bound, residual_tol),
        })
    }

    pub fn problem(&self) -> &EllipticProblem {
        &self.problem
    }
}

impl Semigroup for TrajectoryShift {
    type State = Field;

    fn arrow(&self) -> &TimeArrow {
        &self.arrow
    }

    fn bornology(&self) -> &Bornology {
        &self.bornology
    }

    fn apply(&self, h: &TimePoint, u: &Field) -> Result<Field> {
        check_in_cone(self, h)?;
        let dom = self.problem.domain();
        let mut s = vec![0i64; dom.dim()];
        s[self.axis] = -((h.coords()[0] / dom.spacing()).round() as i64);
        shift(u, &s)
    }

    fn distance(&self, a: &Field, b: &Field) -> f64 {
        self.metric.distance(a, b)
    }

    fn norm(&self, u: &Field) -> f64 {
        u.sup_norm()
    }

    fn constraint_residual(&self, u: &Field) -> Option<f64> {
        super::solver::residual_sup(&self.problem, u).ok()
    }

    fn canonical_key(&self, u: &Field) -> Vec<f64> {
        field_key(u)
    }
}
