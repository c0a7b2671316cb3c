//! Exact Euclidean distance transform on masked lattices.
//!
//! Separable lower-envelope-of-parabolas scheme: one 1D pass per axis over
//! squared distances measured in cells. Periodic axes need no wrap handling
//! because masks are invariant along them.

use super::grid::{CellTag, GridDomain};

/// Squared distance (in cells) from every cell to the nearest `Boundary` cell.
/// `f64::INFINITY` everywhere if the domain has no boundary.
pub fn squared_distance_to_boundary(domain: &GridDomain) -> Vec<f64> {
    let mut d2: Vec<f64> = domain
        .mask()
        .iter()
        .map(|&t| if t == CellTag::Boundary { 0.0 } else { f64::INFINITY })
        .collect();
    let shape = domain.shape();
    let strides = domain.strides();
    let mut line = Vec::new();
    let mut out = Vec::new();
    let mut scratch = Scratch::default();
    for a in 0..domain.dim() {
        let n = shape[a];
        let s = strides[a];
        // starting cells of all lines along axis a: index 0 on axis a
        for start in 0..domain.len() {
            if (start / s) % n != 0 {
                continue;
            }
            line.clear();
            line.extend((0..n).map(|i| d2[start + i * s]));
            edt_1d(&line, &mut out, &mut scratch);
            for i in 0..n {
                d2[start + i * s] = out[i];
            }
        }
    }
    d2
}

/// Distance in spatial units from each non-exterior cell to the boundary;
/// exterior cells get `NaN`.
pub fn depth_map(domain: &GridDomain) -> Vec<f64> {
    let h = domain.spacing();
    squared_distance_to_boundary(domain)
        .into_iter()
        .zip(domain.mask())
        .map(|(d2, &t)| if t == CellTag::Exterior { f64::NAN } else { d2.sqrt() * h })
        .collect()
}

#[derive(Default)]
struct Scratch {
    v: Vec<usize>,
    z: Vec<f64>,
}

fn edt_1d(f: &[f64], out: &mut Vec<f64>, scratch: &mut Scratch) {
    let n = f.len();
    out.clear();
    out.resize(n, f64::INFINITY);
    let v = &mut scratch.v;
    let z = &mut scratch.z;
    v.clear();
    z.clear();
    for q in 0..n {
        if !f[q].is_finite() {
            continue;
        }
        let qf = q as f64;
        loop {
            match v.last() {
                None => {
                    v.push(q);
                    z.push(f64::NEG_INFINITY);
                    break;
                }
                Some(&p) => {
                    let pf = p as f64;
                    let s = ((f[q] + qf * qf) - (f[p] + pf * pf)) / (2.0 * (qf - pf));
                    if s <= *z.last().expect("paired with v") {
                        v.pop();
                        z.pop();
                        continue;
                    }
                    v.push(q);
                    z.push(s);
                    break;
                }
            }
        }
    }
    if v.is_empty() {
        return;
    }
    let mut k = 0;
    for (q, o) in out.iter_mut().enumerate() {
        let qf = q as f64;
        while k + 1 < v.len() && z[k + 1] < qf {
            k += 1;
        }
        let p = v[k];
        let dq = qf - p as f64;
        *o = dq * dq + f[p];
    }
}
