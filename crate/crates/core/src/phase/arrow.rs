use std::sync::Arc;

use super::cone::{Cone, TimePoint};
use super::distance::depth_map;
use super::grid::{CellTag, GridDomain};
use crate::error::{Error, Result};

/// Number of extra probe times generated around the deep sampler point.
pub const PROBE_PERTURBATIONS: usize = 8;

#[derive(Debug, Clone)]
enum Sigma {
    WholeCone,
    Domain {
        domain: Arc<GridDomain>,
        depth: Vec<f64>,
        deepest: Option<usize>,
    },
}

/// Admissible set `Sigma` inside a cone, with its depth function.
#[derive(Debug, Clone)]
pub struct TimeArrow {
    cone: Cone,
    sigma: Sigma,
}

impl TimeArrow {
    /// `Sigma = C`; depth is the distance to the boundary of the cone.
    pub fn whole_cone(cone: Cone) -> Self {
        TimeArrow {
            cone,
            sigma: Sigma::WholeCone,
        }
    }

    /// `Sigma = Omega` inside `C = R^d`, with depth measured to the boundary
    /// cells of the lattice by an exact distance transform.
    pub fn domain(domain: Arc<GridDomain>) -> Result<Self> {
        let cone = Cone::whole_space(domain.dim())?;
        let depth = depth_map(&domain);
        let mut deepest: Option<usize> = None;
        for (c, &d) in depth.iter().enumerate() {
            if d.is_nan() {
                continue;
            }
            // strict comparison keeps the lexicographically first maximizer
            if deepest.is_none_or(|b| d > depth[b]) {
                deepest = Some(c);
            }
        }
        Ok(TimeArrow {
            cone,
            sigma: Sigma::Domain {
                domain,
                depth,
                deepest,
            },
        })
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn domain_ref(&self) -> Option<&Arc<GridDomain>> {
        match &self.sigma {
            Sigma::WholeCone => None,
            Sigma::Domain { domain, .. } => Some(domain),
        }
    }

    /// Per-cell depth map for domain arrows.
    pub fn depth_map(&self) -> Option<&[f64]> {
        match &self.sigma {
            Sigma::WholeCone => None,
            Sigma::Domain { depth, .. } => Some(depth),
        }
    }

    pub fn contains(&self, h: &TimePoint) -> Result<bool> {
        if !self.cone.contains(h)? {
            return Ok(false);
        }
        Ok(match &self.sigma {
            Sigma::WholeCone => true,
            Sigma::Domain { domain, .. } => domain
                .locate(h.coords())
                .is_some_and(|c| domain.tag(c) != CellTag::Exterior),
        })
    }

    /// Distance from `h` to the boundary of `Sigma`.
    pub fn depth(&self, h: &TimePoint) -> Result<f64> {
        if !self.cone.contains(h)? {
            return Err(Error::NotInSigma(h.coords().to_vec()));
        }
        match &self.sigma {
            Sigma::WholeCone => self.cone.boundary_distance(h),
            Sigma::Domain { domain, depth, .. } => match domain.locate(h.coords()) {
                Some(c) if domain.tag(c) != CellTag::Exterior => Ok(depth[c]),
                _ => Err(Error::NotInSigma(h.coords().to_vec())),
            },
        }
    }

    /// Largest depth available in `Sigma` (infinite for whole cones with a
    /// nonempty boundary or for boundaryless domains).
    pub fn capacity(&self) -> f64 {
        match &self.sigma {
            Sigma::WholeCone => f64::INFINITY,
            Sigma::Domain { depth, deepest, .. } => deepest.map_or(0.0, |c| depth[c]),
        }
    }

    /// A point of `Sigma` with depth at least `d`.
    ///
    /// Whole cones return the canonical point of depth exactly `d`; domain
    /// arrows return the deepest cell (first in lexicographic order).
    pub fn deep_time_sampler(&self, d: f64) -> Result<TimePoint> {
        if !(d >= 0.0) {
            return Err(Error::InvalidArgument(format!("depth must be nonnegative, got {d}")));
        }
        match &self.sigma {
            Sigma::WholeCone => Ok(self.cone.point_at_depth(d)),
            Sigma::Domain {
                domain,
                depth,
                deepest,
            } => match deepest {
                Some(c) if depth[*c] >= d => TimePoint::new(domain.position(*c)),
                _ => Err(Error::NoDeepTime {
                    requested: d,
                    max_depth: self.capacity(),
                }),
            },
        }
    }

    /// The sampler point plus [`PROBE_PERTURBATIONS`] deterministic
    /// perturbations, all of depth at least `d`.
    ///
    /// Whole cones perturb along the probe directions of the cone in rounds of
    /// growing magnitude (one-sided along constrained directions). Domain
    /// arrows add cells of `Omega_d` evenly spaced in lexicographic order.
    pub fn probe_times(&self, d: f64) -> Result<Vec<TimePoint>> {
        let base = self.deep_time_sampler(d)?;
        let mut out = vec![base.clone()];
        match &self.sigma {
            Sigma::WholeCone => {
                let dirs = self.cone.probe_directions();
                let mut a = 1.0;
                'outer: loop {
                    for (dir, two_sided) in &dirs {
                        let signs: &[f64] = if *two_sided { &[1.0, -1.0] } else { &[1.0] };
                        for s in signs {
                            if out.len() > PROBE_PERTURBATIONS {
                                break 'outer;
                            }
                            let coords = base
                                .coords()
                                .iter()
                                .zip(dir)
                                .map(|(b, e)| b + s * a * e)
                                .collect();
                            out.push(TimePoint::new(coords)?);
                        }
                    }
                    a += 1.0;
                }
            }
            Sigma::Domain {
                domain,
                depth,
                deepest,
            } => {
                let deep: Vec<usize> = (0..domain.len())
                    .filter(|&c| !depth[c].is_nan() && depth[c] >= d && Some(c) != *deepest)
                    .collect();
                if !deep.is_empty() {
                    let k = PROBE_PERTURBATIONS.min(deep.len());
                    for i in 0..k {
                        let c = deep[(i * deep.len()) / k + deep.len() / (2 * k)];
                        out.push(TimePoint::new(domain.position(c))?);
                    }
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tp(c: &[f64]) -> TimePoint {
        TimePoint::new(c.to_vec()).unwrap()
    }

    #[test]
    fn whole_cone_depth_is_distance_to_hyperplane() {
        let a = TimeArrow::whole_cone(Cone::orthant_product(1, 2).unwrap());
        assert_eq!(a.depth(&tp(&[3.0, 7.0, -2.0])).unwrap(), 3.0);
    }

    #[test]
    fn whole_cone_sampler() {
        let a = TimeArrow::whole_cone(Cone::orthant_product(1, 0).unwrap());
        assert_eq!(a.deep_time_sampler(5.0).unwrap(), tp(&[5.0]));
    }

    #[test]
    fn annulus_depth_example() {
        let dom = Arc::new(GridDomain::annulus(1.0, 40.0, 0.5).unwrap());
        let a = TimeArrow::domain(dom).unwrap();
        let d = a.depth(&tp(&[10.0, 0.0])).unwrap();
        assert!((d - 9.0).abs() <= 0.5, "depth {d}");
        let d = a.depth(&tp(&[6.0, 8.0])).unwrap();
        assert!((d - 9.0).abs() <= 0.5, "depth {d}");
    }

    #[test]
    fn strip_has_no_deep_time_beyond_half_width() {
        let dom = Arc::new(GridDomain::strip(10.0, 40.0, 0.5, true).unwrap());
        let a = TimeArrow::domain(dom).unwrap();
        match a.deep_time_sampler(6.0) {
            Err(Error::NoDeepTime { max_depth, .. }) => assert_eq!(max_depth, 5.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn outside_sigma_is_rejected() {
        let dom = Arc::new(GridDomain::annulus(1.0, 5.0, 0.5).unwrap());
        let a = TimeArrow::domain(dom).unwrap();
        assert!(matches!(a.depth(&tp(&[0.0, 0.0])), Err(Error::NotInSigma(_))));
        assert!(matches!(a.depth(&tp(&[50.0, 0.0])), Err(Error::NotInSigma(_))));
    }

    #[test]
    fn probes_stay_deep() {
        let arrows = [
            TimeArrow::whole_cone(Cone::orthant_product(2, 0).unwrap()),
            TimeArrow::whole_cone(Cone::orthant_product(1, 1).unwrap()),
            TimeArrow::whole_cone(Cone::half_space(vec![1.0, 2.0]).unwrap()),
            TimeArrow::domain(Arc::new(GridDomain::annulus(1.0, 20.0, 0.5).unwrap())).unwrap(),
        ];
        for a in &arrows {
            let probes = a.probe_times(3.0).unwrap();
            assert_eq!(probes.len(), 1 + PROBE_PERTURBATIONS);
            for h in &probes {
                assert!(a.depth(h).unwrap() >= 3.0 - 1e-12, "{h:?}");
            }
        }
    }

    #[test]
    fn orthant_probe_order() {
        let a = TimeArrow::whole_cone(Cone::orthant_product(2, 0).unwrap());
        let p = a.probe_times(1.0).unwrap();
        let coords: Vec<Vec<f64>> = p.iter().map(|h| h.coords().to_vec()).collect();
        assert_eq!(coords[0], vec![1.0, 1.0]);
        assert_eq!(coords[1], vec![2.0, 1.0]);
        assert_eq!(coords[2], vec![1.0, 2.0]);
        assert_eq!(coords[3], vec![3.0, 1.0]);
    }
}
