//! Scalar reaction-diffusion on periodic boxes composed with lattice shifts.

mod checks;
mod cyclic;
mod problem;
mod semigroup;

pub use checks::{comparison_bound, dissipative_check, smoothing_check, DissipativeReport, SmoothingReport};
pub use problem::{shift, to_lattice, ParabolicConfig, ParabolicProblem, Scheme};
pub use semigroup::{extended_apply, ExtendedSemigroup, ShiftSemigroup};
