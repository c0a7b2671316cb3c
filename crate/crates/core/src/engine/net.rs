//! Epsilon-nets and Hausdorff distances for finite point clouds under an
//! arbitrary metric.

/// Greedy farthest-point thinning.
///
/// Points are first ordered by `key` (lexicographically, stable). The net
/// starts from the first point and repeatedly adds the point farthest from the
/// current net until every point is within `radius` of it; ties go to the
/// earlier point in canonical order. Selected points are pairwise at least
/// `radius` apart. Returns indices into `points`.
///
/// Points are grouped by nearest net point; a group is skipped when the
/// triangle inequality shows the new net point cannot be closer to any member,
/// so `dist` must be a metric.
pub fn farthest_point_net<T>(
    points: &[T],
    radius: f64,
    key: impl Fn(&T) -> Vec<f64>,
    dist: impl Fn(&T, &T) -> f64,
) -> Vec<usize> {
    if points.is_empty() {
        return Vec::new();
    }
    let order = canonical_order(points, key);
    let first = &points[order[0]];
    let mut clusters = vec![Cluster::new((0..order.len()).map(|k| (k, dist(first, &points[order[k]]))).collect())];
    let mut net = vec![order[0]];
    loop {
        // farthest point overall; ties to the smallest canonical position
        let (_, far, far_pos) = clusters
            .iter()
            .enumerate()
            .map(|(ci, c)| (ci, c.max, c.arg))
            .fold((0, f64::NEG_INFINITY, usize::MAX), |best, x| {
                if x.1 > best.1 || (x.1 == best.1 && x.2 < best.2) {
                    x
                } else {
                    best
                }
            });
        if !(far >= radius) {
            break;
        }
        let center = &points[order[far_pos]];
        net.push(order[far_pos]);
        let mut moved = Vec::new();
        for c in clusters.iter_mut() {
            let dc = dist(&points[order[c.center_pos]], center);
            if dc >= 2.0 * c.max {
                continue;
            }
            c.members.retain(|&(k, dk)| {
                let d = dist(&points[order[k]], center);
                if d < dk {
                    moved.push((k, d));
                    false
                } else {
                    true
                }
            });
            c.refresh();
        }
        let mut fresh = Cluster::new(moved);
        fresh.center_pos = far_pos;
        clusters.push(fresh);
    }
    net
}

fn canonical_order<T>(points: &[T], key: impl Fn(&T) -> Vec<f64>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    let keys: Vec<Vec<f64>> = points.iter().map(&key).collect();
    order.sort_by(|&a, &b| {
        keys[a]
            .iter()
            .zip(&keys[b])
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    order
}

// Points (canonical position, distance to the net) whose nearest net point
// is `center_pos`.
struct Cluster {
    center_pos: usize,
    members: Vec<(usize, f64)>,
    max: f64,
    arg: usize,
}

impl Cluster {
    fn new(members: Vec<(usize, f64)>) -> Self {
        let mut c = Cluster {
            center_pos: 0,
            members,
            max: f64::NEG_INFINITY,
            arg: usize::MAX,
        };
        c.refresh();
        c
    }

    fn refresh(&mut self) {
        self.max = f64::NEG_INFINITY;
        self.arg = usize::MAX;
        for &(k, d) in &self.members {
            if d > self.max || (d == self.max && k < self.arg) {
                self.max = d;
                self.arg = k;
            }
        }
    }
}

/// Largest distance from a point of `a` to the set `b`.
pub fn directed_hausdorff<T>(a: &[T], b: &[T], dist: impl Fn(&T, &T) -> f64) -> f64 {
    a.iter()
        .map(|x| b.iter().map(|y| dist(x, y)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

pub fn hausdorff<T>(a: &[T], b: &[T], dist: impl Fn(&T, &T) -> f64) -> f64 {
    directed_hausdorff(a, b, &dist).max(directed_hausdorff(b, a, &dist))
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dist(a: &Vec<f64>, b: &Vec<f64>) -> f64 {
        euclidean(a, b)
    }

    #[test]
    fn collapses_a_tight_cluster() {
        let pts: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64 * 1e-4]).collect();
        let net = farthest_point_net(&pts, 0.01, |p| p.clone(), dist);
        assert_eq!(net, vec![0]);
    }

    #[test]
    fn hausdorff_of_shifted_sets() {
        let a = vec![vec![0.0], vec![1.0]];
        let b = vec![vec![0.0], vec![1.5]];
        assert_eq!(hausdorff(&a, &b, dist), 0.5);
        assert_eq!(directed_hausdorff(&a, &b, dist), 0.5);
    }

    proptest! {
        #[test]
        fn net_covers_and_separates(
            pts in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 2), 1..120),
            radius in 0.05f64..0.8,
        ) {
            let net = farthest_point_net(&pts, radius, |p| p.clone(), dist);
            for p in &pts {
                let d = net.iter().map(|&i| dist(p, &pts[i])).fold(f64::INFINITY, f64::min);
                prop_assert!(d < radius);
            }
            for (k, &i) in net.iter().enumerate() {
                for &j in &net[..k] {
                    prop_assert!(dist(&pts[i], &pts[j]) >= radius);
                }
            }
        }

        #[test]
        fn pruning_matches_plain_greedy(
            pts in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 2), 1..150),
            radius in 0.02f64..0.6,
        ) {
            let order = canonical_order(&pts, |p| p.clone());
            let mut min_d = vec![f64::INFINITY; order.len()];
            let mut plain = Vec::new();
            let mut next = 0;
            loop {
                plain.push(order[next]);
                let c = &pts[order[next]];
                let (mut far, mut far_pos) = (0.0f64, 0);
                for (k, slot) in min_d.iter_mut().enumerate() {
                    let d = dist(c, &pts[order[k]]);
                    if d < *slot {
                        *slot = d;
                    }
                    if *slot > far {
                        far = *slot;
                        far_pos = k;
                    }
                }
                if !(far >= radius) {
                    break;
                }
                next = far_pos;
            }
            prop_assert_eq!(farthest_point_net(&pts, radius, |p| p.clone(), dist), plain);
        }

        #[test]
        fn net_is_order_independent(
            pts in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 2), 1..60),
        ) {
            let mut rev = pts.clone();
            rev.reverse();
            let a: Vec<Vec<f64>> = farthest_point_net(&pts, 0.3, |p| p.clone(), dist)
                .into_iter().map(|i| pts[i].clone()).collect();
            let b: Vec<Vec<f64>> = farthest_point_net(&rev, 0.3, |p| p.clone(), dist)
                .into_iter().map(|i| rev[i].clone()).collect();
            prop_assert_eq!(a, b);
        }
    }
}
