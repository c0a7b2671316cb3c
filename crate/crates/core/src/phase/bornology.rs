use serde::{Deserialize, Serialize};

/// Extra condition imposed on members of a bornology.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Constraint {
    None,
    /// Members restrict to solutions of the named elliptic problem.
    SolvesElliptic { problem: String, residual_tol: f64 },
}

/// Family of "bounded" sets, held intensionally (norm bound plus constraint)
/// and checked extensionally on finite samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bornology {
    pub norm_bound: f64,
    pub constraint: Constraint,
}

impl Bornology {
    pub fn bounded(norm_bound: f64) -> Self {
        Bornology {
            norm_bound,
            constraint: Constraint::None,
        }
    }

    pub fn unbounded() -> Self {
        Self::bounded(f64::INFINITY)
    }

    pub fn solutions_of(problem: impl Into<String>, norm_bound: f64, residual_tol: f64) -> Self {
        Bornology {
            norm_bound,
            constraint: Constraint::SolvesElliptic {
                problem: problem.into(),
                residual_tol,
            },
        }
    }

    /// Membership of one sample given its norm and, when the constraint needs
    /// it, its residual against the constraint.
    pub fn admits(&self, norm: f64, residual: Option<f64>) -> Result<(), String> {
        if !(norm <= self.norm_bound) {
            return Err(format!("norm {norm} exceeds bound {}", self.norm_bound));
        }
        match &self.constraint {
            Constraint::None => Ok(()),
            Constraint::SolvesElliptic {
                problem,
                residual_tol,
            } => match residual {
                Some(r) if r <= *residual_tol => Ok(()),
                Some(r) => Err(format!("residual {r} for {problem} exceeds {residual_tol}")),
                None => Err(format!("no residual available for {problem}")),
            },
        }
    }
}
