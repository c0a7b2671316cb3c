//! Multi-parameter semigroups over closed cones with time arrows, numerical
//! estimation of their attractors, and the reaction-diffusion and elliptic
//! experiments built on top of them.

pub mod elliptic;
pub mod engine;
mod error;
pub mod harness;
pub mod nonlinearity;
pub mod parabolic;
pub mod phase;

pub use error::{Error, Result};
