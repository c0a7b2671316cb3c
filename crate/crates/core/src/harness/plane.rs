use std::collections::HashMap;

/// Bucket grid over planar points for nearest-neighbour queries.
pub(crate) struct PlaneIndex<'a> {
    points: &'a [Vec<f64>],
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

impl<'a> PlaneIndex<'a> {
    pub fn new(points: &'a [Vec<f64>], cell: f64) -> Self {
        let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            buckets.entry(Self::key(p[0], p[1], cell)).or_default().push(i);
        }
        PlaneIndex { points, cell, buckets }
    }

    fn key(x: f64, y: f64, cell: f64) -> (i64, i64) {
        ((x / cell).floor() as i64, (y / cell).floor() as i64)
    }

    /// Distance from `(x, y)` to the nearest indexed point.
    pub fn nearest(&self, x: f64, y: f64) -> f64 {
        if self.points.is_empty() {
            return f64::INFINITY;
        }
        let (cx, cy) = Self::key(x, y, self.cell);
        let mut best = f64::INFINITY;
        for ring in 0i64.. {
            // every point outside the searched square is at least this far
            if best <= (ring as f64 - 1.0).max(0.0) * self.cell {
                break;
            }
            for dx in -ring..=ring {
                for dy in -ring..=ring {
                    if dx.abs() != ring && dy.abs() != ring {
                        continue;
                    }
                    if let Some(ids) = self.buckets.get(&(cx + dx, cy + dy)) {
                        for &i in ids {
                            let p = &self.points[i];
                            best = best.min((p[0] - x).hypot(p[1] - y));
                        }
                    }
                }
            }
            if ring > 1_000_000 {
                break;
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_brute_force() {
        let pts: Vec<Vec<f64>> = (0..200)
            .map(|i| {
                let a = i as f64 * 2.399963;
                let r = (i as f64 / 200.0).sqrt();
                vec![r * a.cos(), r * a.sin()]
            })
            .collect();
        let idx = PlaneIndex::new(&pts, 0.05);
        for q in [[0.0, 0.0], [0.9, -0.3], [3.0, 3.0], [-0.51, 0.77]] {
            let brute = pts
                .iter()
                .map(|p| (p[0] - q[0]).hypot(p[1] - q[1]))
                .fold(f64::INFINITY, f64::min);
            assert_eq!(idx.nearest(q[0], q[1]), brute);
        }
    }
}
