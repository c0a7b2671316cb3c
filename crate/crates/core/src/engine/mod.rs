//! Generic omega-limit estimation, invariance checks and attraction profiles
//! for multi-parameter semigroups.

mod directional;
mod field_metric;
mod net;
mod omega;
mod profile;
mod semigroup;
pub mod toys;

pub use directional::{directional_compare, directional_estimate, Directional, DirectionSpec, DirectionalReport};
pub use field_metric::{field_key, FieldDistance};
pub use net::{directed_hausdorff, euclidean, farthest_point_net, hausdorff};
pub use omega::{
    backward_extension, omega_estimate, strict_invariance_defect, AttractorEstimate, BackwardChain, OmegaOptions,
};
pub use profile::{attraction_profile, fmt_sig9, ProfileEntry, RateProfile, Target};
pub(crate) use semigroup::check_in_cone;
pub use semigroup::{identity_defect, par_map, semigroup_law_defect, set_worker_count, worker_count, Semigroup};
