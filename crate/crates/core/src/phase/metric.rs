use std::sync::Arc;

use super::field::Field;
use super::grid::{CellTag, GridDomain};
use crate::error::{Error, Result};

/// Capped weighted-sup metric of the local topology:
/// `d(u, v) = sum_k 2^{-k} min(1, sup_{B(r_k)} |u - v|)`.
///
/// Balls are centered at a lattice cell and measured in cells (wrapping on
/// periodic axes). The finite radius list is closed by the tail term
/// `2^{-K} min(1, sup |u - v|)` over the whole domain, so the weights sum to one
/// and `d <= 1`.
#[derive(Debug, Clone)]
pub struct LocMetric {
    domain: Arc<GridDomain>,
    center: usize,
    radii: Vec<f64>,
    // index of the first ball containing each cell; radii.len() for "tail only"
    bucket: Vec<u32>,
}

impl LocMetric {
    /// Default radii `r_k = k` cells, `k = 1..=52`.
    pub fn new(domain: Arc<GridDomain>, center: usize) -> Result<Self> {
        Self::with_radii(domain, center, (1..=52).map(|k| k as f64).collect())
    }

    pub fn with_radii(domain: Arc<GridDomain>, center: usize, radii: Vec<f64>) -> Result<Self> {
        if center >= domain.len() {
            return Err(Error::InvalidArgument(format!("center {center} outside domain")));
        }
        if radii.is_empty() || radii.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument("radii must be increasing and nonempty".into()));
        }
        let cidx = domain.unravel(center);
        let mut idx = vec![0; domain.dim()];
        let bucket = (0..domain.len())
            .map(|c| {
                domain.unravel_into(c, &mut idx);
                let r2: f64 = (0..domain.dim())
                    .map(|a| {
                        let n = domain.shape()[a] as i64;
                        let mut dlt = (idx[a] as i64 - cidx[a] as i64).abs();
                        if domain.periodic()[a] {
                            dlt = dlt.min(n - dlt);
                        }
                        (dlt * dlt) as f64
                    })
                    .sum();
                let r = r2.sqrt();
                radii.partition_point(|&rk| rk < r) as u32
            })
            .collect();
        Ok(LocMetric {
            domain,
            center,
            radii,
            bucket,
        })
    }

    /// Centered at the deepest cell of the domain (first in lexicographic
    /// order), or at the origin cell for boundaryless domains.
    pub fn centered_deepest(domain: Arc<GridDomain>) -> Result<Self> {
        let depth = super::distance::squared_distance_to_boundary(&domain);
        let mut best: Option<usize> = None;
        for c in 0..domain.len() {
            if domain.tag(c) == CellTag::Exterior {
                continue;
            }
            if best.is_none_or(|b| depth[c] > depth[b]) {
                best = Some(c);
            }
        }
        let center = if best.is_some_and(|b| depth[b].is_infinite()) {
            domain.origin_cell().or(best)
        } else {
            best
        }
        .ok_or_else(|| Error::InvalidDomain("domain has no cells".into()))?;
        Self::new(domain, center)
    }

    pub fn center(&self) -> usize {
        self.center
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn domain(&self) -> &Arc<GridDomain> {
        &self.domain
    }

    pub fn distance(&self, u: &Field, v: &Field) -> Result<f64> {
        if !u.same_domain(v) || !Arc::ptr_eq(u.domain(), &self.domain) && **u.domain() != *self.domain {
            return Err(Error::DomainMismatch);
        }
        let (a, b) = (u.values(), v.values());
        Ok(self.distance_with(|c| Some((a[c] - b[c]).abs())))
    }

    /// Metric evaluated from a per-cell difference oracle; cells where the
    /// oracle returns `None` are skipped (treated as outside both supports).
    pub fn distance_with(&self, diff: impl Fn(usize) -> Option<f64>) -> f64 {
        let k = self.radii.len();
        let mut ball_max = vec![0.0f64; k + 1];
        for (c, &b) in self.bucket.iter().enumerate() {
            if self.domain.tag(c) == CellTag::Exterior {
                continue;
            }
            if let Some(d) = diff(c) {
                let slot = &mut ball_max[b as usize];
                if d > *slot {
                    *slot = d;
                }
            }
        }
        let mut running = 0.0f64;
        let mut total = 0.0;
        let mut w = 1.0;
        for m in &ball_max[..k] {
            running = running.max(*m);
            w *= 0.5;
            total += w * running.min(1.0);
        }
        running = running.max(ball_max[k]);
        total + w * running.min(1.0)
    }
}

/// Sup of `|u - v|` over non-exterior cells within `radius_cells` of `center`.
pub fn windowed_sup_distance(u: &Field, v: &Field, center: usize, radius_cells: f64) -> Result<f64> {
    if !u.same_domain(v) {
        return Err(Error::DomainMismatch);
    }
    let dom = u.domain();
    let offsets = ball_offsets(dom.dim(), radius_cells);
    let cidx = dom.unravel(center);
    let mut best = 0.0f64;
    for off in &offsets {
        if let Some(c) = dom.offset_cell(&cidx, off) {
            if dom.tag(c) != CellTag::Exterior {
                best = best.max((u.get(c) - v.get(c)).abs());
            }
        }
    }
    Ok(best)
}

/// Integer offsets of the discrete ball `|o| <= radius` in `dim` dimensions,
/// in lexicographic order.
pub fn ball_offsets(dim: usize, radius: f64) -> Vec<Vec<i64>> {
    let r = radius.floor() as i64;
    let mut out = Vec::new();
    let mut cur = vec![-r; dim];
    loop {
        let n2: i64 = cur.iter().map(|x| x * x).sum();
        if (n2 as f64) <= radius * radius + 1e-9 {
            out.push(cur.clone());
        }
        let mut a = dim;
        loop {
            if a == 0 {
                return out;
            }
            a -= 1;
            if cur[a] < r {
                cur[a] += 1;
                break;
            }
            cur[a] = -r;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn box1d() -> Arc<GridDomain> {
        Arc::new(GridDomain::periodic_box(1, 256, 256.0).unwrap())
    }

    #[test]
    fn identical_fields_are_at_distance_zero() {
        let d = box1d();
        let m = LocMetric::new(d.clone(), 128).unwrap();
        let u = Field::from_fn(d, |x| x[0].sin());
        assert_eq!(m.distance(&u, &u).unwrap(), 0.0);
    }

    #[test]
    fn constant_gap_gives_geometric_series() {
        let d = box1d();
        let m = LocMetric::new(d.clone(), 128).unwrap();
        let u = Field::constant(d.clone(), 0.5);
        let v = Field::constant(d, 0.0);
        assert!((m.distance(&u, &v).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn far_differences_are_damped() {
        let d = box1d();
        let m = LocMetric::new(d.clone(), 128).unwrap();
        let u = Field::constant(d.clone(), 0.0);
        let kk = 10;
        let v = Field::from_fn(d, |x| if x[0].abs() > kk as f64 + 0.5 { 100.0 } else { 0.0 });
        // center cell is index 128, position 0
        assert!(m.distance(&u, &v).unwrap() <= 0.5f64.powi(kk));
    }

    #[test]
    fn ball_offsets_counts() {
        assert_eq!(ball_offsets(1, 2.0).len(), 5);
        assert_eq!(ball_offsets(2, 1.0).len(), 5);
        assert_eq!(ball_offsets(2, 10.0).len(), 317);
    }

    #[test]
    fn domain_mismatch_is_reported() {
        let m = LocMetric::new(box1d(), 0).unwrap();
        let other = Arc::new(GridDomain::periodic_box(1, 8, 8.0).unwrap());
        let u = Field::constant(other.clone(), 1.0);
        assert_eq!(m.distance(&u, &u), Err(Error::DomainMismatch));
    }
}
