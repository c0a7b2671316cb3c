//! Nonlinear Dirichlet problems `Δu = f(u)` on masked lattices and the
//! plateau, profile and subharmonicity diagnostics built on their solutions.

mod analysis;
mod problem;
mod solver;

pub use analysis::{
    attraction_profile_elliptic, deep_components, equilibrium_set, interior_gradient_check, plateau_assign,
    subharmonic_defect, trajectory_shift_closure_check, EquilibriumSet, GradientReport, PlateauAssignment,
    PlateauComponent, TrajectoryShift,
};
pub use problem::{BoundaryData, DomainSpec, EllipticConfig, EllipticProblem, SolverOptions};
pub use solver::{
    harmonic_extension, interpolate, residual_sup, solve_elliptic, EllipticSolution, Init, SolveCertificate,
    CERTIFIED_RESIDUAL,
};
