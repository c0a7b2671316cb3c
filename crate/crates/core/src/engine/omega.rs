use serde::Serialize;

use super::net::{farthest_point_net, hausdorff};
use super::semigroup::{check_in_cone, par_map, Semigroup};
use crate::error::{Error, Result};
use crate::phase::TimePoint;

/// Finite net approximating an omega-limit set / attractor.
///
/// Net points cover the collected terminal states within `epsilon / 2` and are
/// pairwise at least `epsilon / 2` apart.
#[derive(Debug, Clone, Serialize)]
pub struct AttractorEstimate<St> {
    pub points: Vec<St>,
    pub epsilon: f64,
    pub depths_used: Vec<f64>,
    /// `(probe time, strict invariance defect)` for every invariance probe.
    pub invariance_defects: Vec<(TimePoint, f64)>,
    /// Largest entry of `invariance_defects`.
    pub invariance_defect: f64,
    /// Hausdorff distance between the nets built at the two largest depths.
    pub stabilization: Option<f64>,
    /// Largest norm seen at each depth (boundedness monitor).
    pub max_norm_by_depth: Vec<(f64, f64)>,
    pub provenance: String,
}

#[derive(Debug, Clone)]
pub struct OmegaOptions {
    /// Times at which strict invariance is probed. Empty means the cone's
    /// interior witness.
    pub invariance_times: Vec<TimePoint>,
    pub provenance: String,
}

impl Default for OmegaOptions {
    fn default() -> Self {
        OmegaOptions {
            invariance_times: Vec::new(),
            provenance: "unspecified sample".into(),
        }
    }
}

pub(crate) fn check_seeds<S: Semigroup>(s: &S, seeds: &[S::State]) -> Result<()> {
    if seeds.is_empty() {
        return Err(Error::InvalidArgument("no seeds".into()));
    }
    for (i, u) in seeds.iter().enumerate() {
        s.bornology()
            .admits(s.norm(u), s.constraint_residual(u))
            .map_err(|e| Error::NotInBornology(format!("seed {i}: {e}")))?;
    }
    Ok(())
}

pub(crate) fn check_depths(depths: &[f64]) -> Result<()> {
    if depths.is_empty() || depths.windows(2).any(|w| !(w[1] > w[0])) || !(depths[0] >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "depth list must be nonempty, nonnegative and increasing: {depths:?}"
        )));
    }
    Ok(())
}

/// Evolves every seed by every probe time of depth `d`.
pub(crate) fn evolve_at_depth<S: Semigroup>(s: &S, seeds: &[S::State], d: f64) -> Result<Vec<S::State>> {
    let probes = s.arrow().probe_times(d)?;
    let jobs: Vec<(usize, usize)> = (0..seeds.len())
        .flat_map(|i| (0..probes.len()).map(move |j| (i, j)))
        .collect();
    par_map(&jobs, |&(i, j)| s.apply(&probes[j], &seeds[i]))
        .into_iter()
        .map(|r| {
            let st = r?;
            if !s.norm(&st).is_finite() {
                return Err(Error::NonFiniteState { step: None });
            }
            Ok(st)
        })
        .collect()
}

fn net_of<S: Semigroup>(s: &S, cloud: &[S::State], eps: f64) -> Vec<S::State> {
    farthest_point_net(cloud, eps / 2.0, |u| s.canonical_key(u), |a, b| s.distance(a, b))
        .into_iter()
        .map(|i| cloud[i].clone())
        .collect()
}

/// Estimates `omega(B)` from a finite sample of `B`.
///
/// Every seed is evolved by the probe times of each depth in `depths`; the
/// terminal states at the largest depth are thinned to a net. The net built
/// at the second-largest depth is compared against it to report
/// stabilization, and strict invariance is probed at `opts.invariance_times`.
pub fn omega_estimate<S: Semigroup>(
    s: &S,
    seeds: &[S::State],
    depths: &[f64],
    eps: f64,
    opts: &OmegaOptions,
) -> Result<AttractorEstimate<S::State>> {
    check_depths(depths)?;
    check_seeds(s, seeds)?;
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    // fail early if the deepest request is not available
    s.arrow().deep_time_sampler(*depths.last().expect("nonempty"))?;

    let mut max_norm_by_depth = Vec::with_capacity(depths.len());
    let mut prev_net: Option<Vec<S::State>> = None;
    let mut last_net = Vec::new();
    for (k, &d) in depths.iter().enumerate() {
        let cloud = evolve_at_depth(s, seeds, d)?;
        let m = cloud.iter().map(|u| s.norm(u)).fold(0.0, f64::max);
        max_norm_by_depth.push((d, m));
        if k + 2 == depths.len() {
            prev_net = Some(net_of(s, &cloud, eps));
        } else if k + 1 == depths.len() {
            last_net = net_of(s, &cloud, eps);
        }
    }
    let stabilization = prev_net.map(|p| hausdorff(&p, &last_net, |a, b| s.distance(a, b)));

    let times = if opts.invariance_times.is_empty() {
        vec![s.arrow().cone().interior_witness().clone()]
    } else {
        opts.invariance_times.clone()
    };
    let mut estimate = AttractorEstimate {
        points: last_net,
        epsilon: eps,
        depths_used: depths.to_vec(),
        invariance_defects: Vec::new(),
        invariance_defect: 0.0,
        stabilization,
        max_norm_by_depth,
        provenance: opts.provenance.clone(),
    };
    for h in times {
        let d = strict_invariance_defect(&estimate, s, &h)?;
        estimate.invariance_defect = estimate.invariance_defect.max(d);
        estimate.invariance_defects.push((h, d));
    }
    Ok(estimate)
}

/// Numerical defect of `S(h) A = A`: the larger of the forward-inclusion
/// defect `max_a dist(S(h) a, A)` and the surjectivity defect
/// `max_a dist(a, S(h) A)`.
pub fn strict_invariance_defect<S: Semigroup>(
    a: &AttractorEstimate<S::State>,
    s: &S,
    h: &TimePoint,
) -> Result<f64> {
    check_in_cone(s, h)?;
    let images: Vec<S::State> = par_map(&a.points, |p| s.apply(h, p))
        .into_iter()
        .collect::<Result<_>>()?;
    let dist_to = |x: &S::State, set: &[S::State]| {
        set.iter().map(|y| s.distance(x, y)).fold(f64::INFINITY, f64::min)
    };
    let forward = par_map(&images, |im| dist_to(im, &a.points))
        .into_iter()
        .fold(0.0, f64::max);
    let onto = par_map(&a.points, |p| dist_to(p, &images))
        .into_iter()
        .fold(0.0, f64::max);
    Ok(forward.max(onto))
}

/// Approximate backward continuation through the net.
#[derive(Debug, Clone, Serialize)]
pub struct BackwardChain<St> {
    /// `chain[0]` is the starting point, `chain[k]` approximates the state at
    /// time `-k * h_step`.
    pub chain: Vec<St>,
    /// Largest one-step mismatch `dist(S(h_step) chain[k+1], chain[k])`.
    pub max_defect: f64,
}

/// Greedily extends `u0` backwards in time through the net of `a`: each step
/// picks the net point whose image under `S(h_step)` is closest to the
/// current point.
pub fn backward_extension<S: Semigroup>(
    a: &AttractorEstimate<S::State>,
    s: &S,
    u0: &S::State,
    h_step: &TimePoint,
    n_steps: usize,
) -> Result<BackwardChain<S::State>> {
    if s.arrow().cone().boundary_distance(h_step)? <= 0.0 {
        return Err(Error::TimeOutsideCone(h_step.coords().to_vec()));
    }
    let limit = 2.0 * a.epsilon;
    let d0 = a
        .points
        .iter()
        .map(|p| s.distance(u0, p))
        .fold(f64::INFINITY, f64::min);
    if !(d0 <= limit) {
        return Err(Error::NotOnAttractor { distance: d0, limit });
    }
    let images: Vec<S::State> = par_map(&a.points, |p| s.apply(h_step, p))
        .into_iter()
        .collect::<Result<_>>()?;
    let mut chain = vec![u0.clone()];
    let mut max_defect = 0.0f64;
    for _ in 0..n_steps {
        let cur = chain.last().expect("nonempty");
        let (best, d) = images
            .iter()
            .enumerate()
            .map(|(i, im)| (i, s.distance(im, cur)))
            .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
        max_defect = max_defect.max(d);
        chain.push(a.points[best].clone());
    }
    Ok(BackwardChain { chain, max_defect })
}
