//! Phase-space geometry: cones and time arrows, masked lattices, fields,
//! bornologies and the local-topology metric.

mod arrow;
mod bornology;
mod cone;
pub mod distance;
mod field;
mod grid;
mod metric;

pub use arrow::{TimeArrow, PROBE_PERTURBATIONS};
pub use bornology::{Bornology, Constraint};
pub use cone::{Cone, ConeKind, TimePoint};
pub use field::{Field, FieldSidecar};
pub use grid::{CellTag, DomainDescriptor, GridDomain};
pub use metric::{ball_offsets, windowed_sup_distance, LocMetric};
