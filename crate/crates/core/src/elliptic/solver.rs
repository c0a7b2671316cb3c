use std::collections::VecDeque;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::problem::EllipticProblem;
use crate::error::{Error, Result};
use crate::phase::{CellTag, Field, GridDomain};

/// Starting guess for [`solve_elliptic`].
#[derive(Debug, Clone)]
pub enum Init {
    /// Solution of the discrete Laplace problem with the same boundary data.
    HarmonicExtension,
    ConstantGuess(f64),
    /// Interior values of a field on the same domain.
    Given(Field),
}

/// Residual evidence attached to a solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveCertificate {
    /// `max |Δ_h u - f(u)|` over interior cells.
    pub residual: f64,
    /// Nonlinear iterations taken.
    pub iters: usize,
    /// Total preconditioned CG iterations.
    pub linear_iters: usize,
    /// Residual sup-norm after each accepted iteration.
    pub history: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct EllipticSolution {
    pub field: Field,
    pub certificate: SolveCertificate,
}

/// Residual level required of every returned solution.
pub const CERTIFIED_RESIDUAL: f64 = 1e-8;

const SWITCH_TO_NEWTON: f64 = 1e-4;
const MAX_HALVINGS: usize = 30;
const MAX_CG_ITERS: usize = 50_000;

/// Five-point (three-point in 1D) stencil over the interior cells.
pub(crate) struct Stencil {
    pub(crate) cells: Vec<usize>,
    // per interior index: 2*dim neighbor cells
    nb_cell: Vec<usize>,
    // same neighbors as interior indices, or NONE for boundary cells
    nb_int: Vec<u32>,
    deg: usize,
    inv_h2: f64,
}

const NONE: u32 = u32::MAX;

impl Stencil {
    pub(crate) fn new(domain: &GridDomain) -> Self {
        let deg = 2 * domain.dim();
        let cells: Vec<usize> = (0..domain.len())
            .filter(|&c| domain.tag(c) == CellTag::Interior)
            .collect();
        let mut index = vec![NONE; domain.len()];
        for (i, &c) in cells.iter().enumerate() {
            index[c] = i as u32;
        }
        let mut nb_cell = Vec::with_capacity(cells.len() * deg);
        let mut idx = vec![0; domain.dim()];
        for &c in &cells {
            domain.unravel_into(c, &mut idx);
            for a in 0..domain.dim() {
                for step in [-1, 1] {
                    let n = domain
                        .neighbor(c, &idx, a, step)
                        .expect("interior cells have all neighbors");
                    nb_cell.push(n);
                }
            }
        }
        let nb_int = nb_cell.iter().map(|&n| index[n]).collect();
        let h = domain.spacing();
        Stencil {
            cells,
            nb_cell,
            nb_int,
            deg,
            inv_h2: 1.0 / (h * h),
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.cells.len()
    }

    /// `Δ_h u` at interior index `i`, summed as differences.
    #[inline]
    pub(crate) fn laplacian(&self, u: &[f64], i: usize) -> f64 {
        let uc = u[self.cells[i]];
        let s: f64 = self.nb_cell[i * self.deg..(i + 1) * self.deg]
            .iter()
            .map(|&n| u[n] - uc)
            .sum();
        s * self.inv_h2
    }

    /// Neighbor cells of interior index `i`.
    pub(crate) fn neighbors(&self, i: usize) -> &[usize] {
        &self.nb_cell[i * self.deg..(i + 1) * self.deg]
    }

    fn residual(&self, p: &EllipticProblem, u: &[f64], out: &mut [f64]) -> f64 {
        let f = p.nonlinearity();
        let mut m = 0.0f64;
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.laplacian(u, i) - f.eval(u[self.cells[i]]);
            m = m.max(o.abs());
            if o.is_nan() {
                m = f64::NAN;
            }
        }
        m
    }

    /// `y = diag .* x - (1/h^2) sum_{interior nbrs} x`, i.e. `sigma I - Δ_h +
    /// diag(f'(u))` when `diag = sigma + deg/h^2 + f'(u)`.
    fn matvec(&self, diag: &[f64], x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut s = 0.0;
            for &j in &self.nb_int[i * self.deg..(i + 1) * self.deg] {
                if j != NONE {
                    s += x[j as usize];
                }
            }
            *yi = diag[i] * x[i] - self.inv_h2 * s;
        }
    }
}

enum CgOutcome {
    Converged(usize),
    Indefinite,
    Stalled(usize),
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Jacobi-preconditioned CG for the operator of [`Stencil::matvec`]; `x`
/// holds the initial guess and receives the solution.
fn pcg(st: &Stencil, diag: &[f64], b: &[f64], x: &mut [f64], rtol: f64) -> CgOutcome {
    if diag.iter().any(|&d| !(d > 0.0)) {
        return CgOutcome::Indefinite;
    }
    let n = b.len();
    let mut r = vec![0.0; n];
    st.matvec(diag, x, &mut r);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
    let bnorm = dot(b, b).sqrt();
    let target = rtol * bnorm;
    if dot(&r, &r).sqrt() <= target || bnorm == 0.0 {
        return CgOutcome::Converged(0);
    }
    let mut z: Vec<f64> = r.iter().zip(diag).map(|(ri, d)| ri / d).collect();
    let mut p = z.clone();
    let mut q = vec![0.0; n];
    let mut rz = dot(&r, &z);
    for it in 1..=MAX_CG_ITERS {
        st.matvec(diag, &p, &mut q);
        let pq = dot(&p, &q);
        if !(pq > 0.0) {
            return CgOutcome::Indefinite;
        }
        let alpha = rz / pq;
        let mut rr = 0.0;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
            rr += r[i] * r[i];
        }
        if rr.sqrt() <= target {
            return CgOutcome::Converged(it);
        }
        for i in 0..n {
            z[i] = r[i] / diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    CgOutcome::Stalled(MAX_CG_ITERS)
}

/// Copies boundary data over `u` and clears exterior cells.
fn impose_boundary(p: &EllipticProblem, u: &mut [f64]) {
    let dom = p.domain();
    for (c, v) in u.iter_mut().enumerate() {
        match dom.tag(c) {
            CellTag::Boundary => *v = p.boundary_values()[c],
            CellTag::Exterior => *v = 0.0,
            CellTag::Interior => {}
        }
    }
}

/// Fills interior cells with the value of the nearest boundary cell in
/// lattice (breadth-first) order; zero if there is no boundary.
fn nearest_boundary_fill(p: &EllipticProblem) -> Vec<f64> {
    let dom = p.domain();
    let mut u = p.boundary_values().to_vec();
    let mut seen: Vec<bool> = dom.mask().iter().map(|&t| t != CellTag::Interior).collect();
    let mut queue: VecDeque<usize> = (0..dom.len()).filter(|&c| dom.tag(c) == CellTag::Boundary).collect();
    let mut idx = vec![0; dom.dim()];
    while let Some(c) = queue.pop_front() {
        dom.unravel_into(c, &mut idx);
        for a in 0..dom.dim() {
            for step in [-1, 1] {
                if let Some(n) = dom.neighbor(c, &idx, a, step) {
                    if !seen[n] {
                        seen[n] = true;
                        u[n] = u[c];
                        queue.push_back(n);
                    }
                }
            }
        }
    }
    u
}

/// Discrete harmonic extension of the boundary data.
pub fn harmonic_extension(p: &EllipticProblem) -> Result<Field> {
    let st = Stencil::new(p.domain());
    let mut u = nearest_boundary_fill(p);
    if p.domain().count(CellTag::Boundary) > 0 {
        let diag = vec![st.deg as f64 * st.inv_h2; st.len()];
        let mut b = vec![0.0; st.len()];
        for (i, bi) in b.iter_mut().enumerate() {
            *bi = st.laplacian(&u, i);
        }
        let mut x = vec![0.0; st.len()];
        if let CgOutcome::Indefinite = pcg(&st, &diag, &b, &mut x, 1e-10) {
            return Err(Error::InvalidDomain("Laplacian is singular on this domain".into()));
        }
        for (i, &c) in st.cells.iter().enumerate() {
            u[c] += x[i];
        }
    }
    Field::new(p.domain().clone(), u)
}

/// Sup-norm of `Δ_h u - f(u)` over interior cells.
pub fn residual_sup(p: &EllipticProblem, u: &Field) -> Result<f64> {
    if !Arc::ptr_eq(u.domain(), p.domain()) && **u.domain() != **p.domain() {
        return Err(Error::DomainMismatch);
    }
    let st = Stencil::new(p.domain());
    let mut out = vec![0.0; st.len()];
    Ok(st.residual(p, u.values(), &mut out))
}

/// Solves `Δ_h u = f(u)` with the problem's boundary data.
///
/// Pseudo-time continuation `(I/dτ - J) δ = F(u)` with the step grown by
/// residual ratio, then damped Newton once the residual is below `1e-4`.
/// Linear systems use Jacobi-preconditioned CG; when the Newton Jacobian is
/// found indefinite the iteration falls back to a pseudo-time step.
pub fn solve_elliptic(p: &EllipticProblem, init: Init) -> Result<EllipticSolution> {
    let opts = &p.solver;
    if !(opts.dt > 0.0 && opts.newton_tol > 0.0) {
        return Err(Error::InvalidArgument("solver dt and newton_tol must be positive".into()));
    }
    let dom = p.domain();
    let mut u = match init {
        Init::HarmonicExtension => harmonic_extension(p)?.into_values(),
        Init::ConstantGuess(c) => vec![c; dom.len()],
        Init::Given(f) => {
            if **f.domain() != **dom {
                return Err(Error::DomainMismatch);
            }
            f.into_values()
        }
    };
    impose_boundary(p, &mut u);
    if u.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteState { step: Some(0) });
    }
    let st = Stencil::new(dom);
    let n = st.len();
    let f = p.nonlinearity();
    let mut res = vec![0.0; n];
    let mut trial_res = vec![0.0; n];
    let mut rn = st.residual(p, &u, &mut res);
    let mut history = vec![rn];
    let mut dtau = opts.dt;
    let mut newton = rn < SWITCH_TO_NEWTON;
    let mut linear_iters = 0;
    let mut diag = vec![0.0; n];
    let mut delta = vec![0.0; n];
    let mut trial = u.clone();
    let mut iters = 0;

    while !(rn <= opts.newton_tol) {
        if iters >= opts.max_iters || !rn.is_finite() {
            return Err(Error::NoConvergence { history });
        }
        iters += 1;
        let sigma = if newton { 0.0 } else { 1.0 / dtau };
        for (i, d) in diag.iter_mut().enumerate() {
            *d = sigma + st.deg as f64 * st.inv_h2 + f.derivative(u[st.cells[i]]);
        }
        delta.iter_mut().for_each(|d| *d = 0.0);
        let rtol = if newton { 1e-6 } else { 1e-3 };
        match pcg(&st, &diag, &res, &mut delta, rtol) {
            CgOutcome::Converged(k) | CgOutcome::Stalled(k) => linear_iters += k,
            CgOutcome::Indefinite => {
                if newton {
                    newton = false;
                } else {
                    dtau *= 0.25;
                }
                continue;
            }
        }
        if newton {
            // backtracking on the residual sup-norm
            let mut lambda = 1.0;
            let mut accepted = None;
            for _ in 0..=MAX_HALVINGS {
                trial.copy_from_slice(&u);
                for (i, &c) in st.cells.iter().enumerate() {
                    trial[c] += lambda * delta[i];
                }
                let r = st.residual(p, &trial, &mut trial_res);
                if r < rn {
                    accepted = Some(r);
                    break;
                }
                lambda *= 0.5;
            }
            match accepted {
                Some(r) => {
                    std::mem::swap(&mut u, &mut trial);
                    std::mem::swap(&mut res, &mut trial_res);
                    rn = r;
                    history.push(rn);
                }
                // already certified and stuck at rounding level
                None if rn <= CERTIFIED_RESIDUAL => break,
                None => newton = false,
            }
        } else {
            trial.copy_from_slice(&u);
            for (i, &c) in st.cells.iter().enumerate() {
                trial[c] += delta[i];
            }
            let r = st.residual(p, &trial, &mut trial_res);
            if !(r.is_finite() && r < 10.0 * rn.max(1e-300)) {
                dtau *= 0.25;
                continue;
            }
            std::mem::swap(&mut u, &mut trial);
            std::mem::swap(&mut res, &mut trial_res);
            dtau = (dtau * (rn / r).clamp(0.5, 10.0)).min(1e12);
            rn = r;
            history.push(rn);
            if rn < SWITCH_TO_NEWTON {
                newton = true;
            }
        }
    }
    if !(rn <= CERTIFIED_RESIDUAL) {
        return Err(Error::NoConvergence { history });
    }
    Ok(EllipticSolution {
        field: Field::new(dom.clone(), u)?,
        certificate: SolveCertificate {
            residual: rn,
            iters,
            linear_iters,
            history,
        },
    })
}

/// Bilinear (linear in 1D) transfer of `u` to another lattice over the same
/// region. Corners outside the source or on exterior cells are dropped and
/// the weights renormalized; cells with no usable corner get zero.
pub fn interpolate(u: &Field, target: Arc<GridDomain>) -> Result<Field> {
    let src = u.domain();
    if src.dim() != target.dim() {
        return Err(Error::DimensionMismatch {
            expected: src.dim(),
            got: target.dim(),
        });
    }
    let dim = src.dim();
    let h = src.spacing();
    let values = (0..target.len())
        .map(|c| {
            if target.tag(c) == CellTag::Exterior {
                return 0.0;
            }
            let x = target.position(c);
            let base: Vec<f64> = x.iter().map(|xi| (xi / h).floor()).collect();
            let frac: Vec<f64> = x.iter().zip(&base).map(|(xi, b)| xi / h - b).collect();
            let (mut acc, mut wsum) = (0.0, 0.0);
            for corner in 0..(1usize << dim) {
                let mut pos = vec![0.0; dim];
                let mut w = 1.0;
                for a in 0..dim {
                    let bit = (corner >> a) & 1;
                    pos[a] = (base[a] + bit as f64) * h;
                    w *= if bit == 1 { frac[a] } else { 1.0 - frac[a] };
                }
                if w == 0.0 {
                    continue;
                }
                if let Some(s) = src.locate(&pos) {
                    if src.tag(s) != CellTag::Exterior {
                        acc += w * u.get(s);
                        wsum += w;
                    }
                }
            }
            if wsum > 0.0 {
                acc / wsum
            } else {
                0.0
            }
        })
        .collect();
    Field::new(target, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonlinearity::Nonlinearity;

    #[test]
    fn constant_data_gives_constant_solution() {
        let d = Arc::new(GridDomain::annulus(1.0, 4.0, 0.25).unwrap());
        for k in 0..=2 {
            let p = EllipticProblem::new(d.clone(), Nonlinearity::plateau(2), |_| k as f64).unwrap();
            let s = solve_elliptic(&p, Init::HarmonicExtension).unwrap();
            assert_eq!(s.certificate.residual, 0.0);
            assert!(s.field.packed().iter().all(|&v| v == k as f64));
        }
    }

    #[test]
    fn zero_solution_on_interval() {
        let d = Arc::new(GridDomain::interval(10.0, 0.1).unwrap());
        let p = EllipticProblem::new(d, Nonlinearity::cubic(), |_| 0.0).unwrap();
        let s = solve_elliptic(&p, Init::ConstantGuess(0.0)).unwrap();
        assert!(s.field.sup_norm() <= 1e-8);
    }

    #[test]
    fn one_dimensional_layer_matches_closed_form() {
        // u'' = u^3 - u on [0, inf) with u(0) = 0 has u = tanh(x / sqrt 2)
        let d = Arc::new(GridDomain::interval(20.0, 0.02).unwrap());
        let p = EllipticProblem::new(d.clone(), Nonlinearity::cubic(), |x| if x[0] < 0.0 { -1.0 } else { 1.0 })
            .unwrap();
        let guess = Field::from_fn(d, |x| (x[0] / 2f64.sqrt()).tanh());
        let s = solve_elliptic(&p, Init::Given(guess)).unwrap();
        assert!(s.certificate.residual <= 1e-10);
        let dom = s.field.domain().clone();
        let c = dom.locate(&[1.0]).unwrap();
        assert!((s.field.get(c) - (1.0 / 2f64.sqrt()).tanh()).abs() < 1e-3);
    }

    #[test]
    fn plateau_on_small_annulus() {
        let d = Arc::new(GridDomain::annulus(1.0, 8.0, 0.1).unwrap());
        let p = EllipticProblem::new(d, Nonlinearity::plateau(2), |x| {
            1.0 + 1.5 * (3.0 * x[1].atan2(x[0])).cos()
        })
        .unwrap();
        let s = solve_elliptic(&p, Init::ConstantGuess(0.0)).unwrap();
        assert!(s.certificate.residual <= 1e-10, "{:?}", s.certificate.history);
        assert_eq!(residual_sup(&p, &s.field).unwrap(), s.certificate.residual);
    }

    #[test]
    fn interpolation_reproduces_linear_fields() {
        let coarse = Arc::new(GridDomain::periodic_box(2, 16, 16.0).unwrap());
        let fine = Arc::new(GridDomain::periodic_box(2, 24, 12.0).unwrap());
        let u = Field::from_fn(coarse, |x| 2.0 * x[0] - x[1]);
        let v = interpolate(&u, fine).unwrap();
        for c in 0..v.domain().len() {
            let x = v.domain().position(c);
            assert!((v.get(c) - (2.0 * x[0] - x[1])).abs() < 1e-12);
        }
    }
}
