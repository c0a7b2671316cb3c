use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::omega::{check_depths, check_seeds, evolve_at_depth};
use super::semigroup::Semigroup;
use crate::error::{Error, Result};

/// Set that deep-time states should approach.
#[derive(Debug, Clone)]
pub enum Target<St> {
    /// Finite set of phase points; distance is the minimum over the points.
    Points(Vec<St>),
    /// Closed norm ball of the given radius; distance is the norm excess.
    NormBall(f64),
}

impl<St> Target<St> {
    pub fn distance<S: Semigroup<State = St>>(&self, s: &S, u: &St) -> f64 {
        match self {
            Target::Points(pts) => pts.iter().map(|p| s.distance(u, p)).fold(f64::INFINITY, f64::min),
            Target::NormBall(r) => (s.norm(u) - r).max(0.0),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Target::Points(p) => format!("{} points", p.len()),
            Target::NormBall(r) => format!("norm ball of radius {r}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry {
    #[serde(rename = "D")]
    pub depth: f64,
    pub sup_dist: f64,
    pub direction_id: Option<String>,
}

/// Empirical attraction rate: worst distance to the target at each depth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateProfile {
    pub entries: Vec<ProfileEntry>,
    pub target: String,
    /// Requested depths for which no sample existed.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<f64>,
}

impl RateProfile {
    pub fn new(target: impl Into<String>) -> Self {
        RateProfile {
            entries: Vec::new(),
            target: target.into(),
            skipped: Vec::new(),
        }
    }

    pub fn push(&mut self, depth: f64, sup_dist: f64, direction_id: Option<String>) {
        self.entries.push(ProfileEntry {
            depth,
            sup_dist,
            direction_id,
        });
        self.entries.sort_by(|a, b| a.depth.total_cmp(&b.depth));
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, depth: f64) -> Option<f64> {
        self.entries.iter().find(|e| e.depth == depth).map(|e| e.sup_dist)
    }

    /// True if every entry is at most the previous one plus `slack`.
    pub fn is_nonincreasing(&self, slack: f64) -> bool {
        self.entries.windows(2).all(|w| w[1].sup_dist <= w[0].sup_dist + slack)
    }

    /// CSV with header `D,sup_dist,direction_id`, nine significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("D,sup_dist,direction_id\n");
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{},{},{}",
                fmt_sig9(e.depth),
                fmt_sig9(e.sup_dist),
                e.direction_id.as_deref().unwrap_or("")
            );
        }
        out
    }

    /// Least-squares fit of `ln(sup_dist)` against `D` over strictly positive
    /// entries: `(slope, intercept, r_squared)`. Needs two distinct depths.
    pub fn log_linear_fit(&self) -> Option<(f64, f64, f64)> {
        let pts: Vec<(f64, f64)> = self
            .entries
            .iter()
            .filter(|e| e.sup_dist > 0.0 && e.sup_dist.is_finite())
            .map(|e| (e.depth, e.sup_dist.ln()))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
        if sxx == 0.0 {
            return None;
        }
        let slope = sxy / sxx;
        let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
        Some((slope, my - slope * mx, r2))
    }
}

/// Formats with nine significant digits in scientific notation, e.g.
/// `2.70670566e-1`.
pub fn fmt_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000e0".into();
    }
    format!("{x:.8e}")
}

/// For each depth `D`, the sup over seeds and over the probe times of depth
/// `D` of the distance from the evolved state to `target`.
pub fn attraction_profile<S: Semigroup>(
    s: &S,
    seeds: &[S::State],
    target: &Target<S::State>,
    depths: &[f64],
    direction_id: Option<&str>,
) -> Result<RateProfile> {
    check_depths(depths)?;
    check_seeds(s, seeds)?;
    let mut profile = RateProfile::new(target.describe());
    for &d in depths {
        let states = evolve_at_depth(s, seeds, d)?;
        let sup = states
            .iter()
            .map(|u| target.distance(s, u))
            .fold(0.0, f64::max);
        if !sup.is_finite() {
            return Err(Error::NonFiniteState { step: None });
        }
        profile.push(d, sup, direction_id.map(str::to_owned));
    }
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_format_is_fixed() {
        let mut p = RateProfile::new("t");
        p.push(1.0, 2.0 * (-2.0f64).exp(), None);
        p.push(0.5, 0.0, Some("l1".into()));
        assert_eq!(
            p.to_csv(),
            "D,sup_dist,direction_id\n5.00000000e-1,0.00000000e0,l1\n1.00000000e0,2.70670566e-1,\n"
        );
    }

    #[test]
    fn fit_recovers_exponential_rate() {
        let mut p = RateProfile::new("t");
        for d in [1.0, 2.0, 3.0] {
            p.push(d, 2.0 * (-2.0 * d).exp(), None);
        }
        let (slope, icpt, r2) = p.log_linear_fit().unwrap();
        assert!((slope + 2.0).abs() < 1e-12);
        assert!((icpt - 2f64.ln()).abs() < 1e-12);
        assert!((r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_entry_has_no_fit() {
        let mut p = RateProfile::new("t");
        p.push(1.0, 0.5, None);
        assert!(p.log_linear_fit().is_none());
    }
}
