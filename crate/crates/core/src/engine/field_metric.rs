use crate::phase::{windowed_sup_distance, Field, LocMetric};

/// Distance used between field-phase points.
#[derive(Debug, Clone)]
pub enum FieldDistance {
    /// Capped weighted-sup metric of the local topology.
    Loc(LocMetric),
    /// Sup of `|u - v|` over the discrete ball of `radius_cells` around `center`.
    Windowed { center: usize, radius_cells: f64 },
    /// Global sup over non-exterior cells.
    Sup,
}

impl FieldDistance {
    /// Distance between two fields; infinite when they live on different
    /// domains.
    pub fn distance(&self, u: &Field, v: &Field) -> f64 {
        let d = match self {
            FieldDistance::Loc(m) => m.distance(u, v),
            FieldDistance::Windowed {
                center,
                radius_cells,
            } => windowed_sup_distance(u, v, *center, *radius_cells),
            FieldDistance::Sup => u.sup_distance(v),
        };
        d.unwrap_or(f64::INFINITY)
    }
}

/// Canonical ordering key for a field: mean, sup-norm, then the first values.
pub fn field_key(u: &Field) -> Vec<f64> {
    let mut k = vec![u.mean(), u.sup_norm()];
    k.extend(u.packed().into_iter().take(4));
    k
}
