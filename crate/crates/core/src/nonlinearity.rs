//! Polynomial reaction terms `f` shared by the parabolic and elliptic labs.
//!
//! Sign convention: the parabolic equation is `u_t = Δu - f(u)` and the
//! elliptic one is `Δu - f(u) = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which polynomial `f` is.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum NonlinearityKind {
    /// `f(u) = u^3 - u`.
    Cubic,
    /// `f(u) = u (u-1)^2 (u-2)^2 ... (u-N)^2`.
    PlateauPoly {
        #[serde(rename = "N")]
        n: u32,
    },
    /// `f(u) = sum_i c_i u^i` (ascending coefficients).
    Custom { coefficients: Vec<f64> },
}

/// Constants `(C, eps)` for which `f(u) u >= -C + |u|^{2+eps}` holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperlinearityCertificate {
    pub c: f64,
    pub eps: f64,
}

/// Range sampled when computing or verifying a certificate.
pub const CERTIFICATE_RANGE: f64 = 100.0;
const CERTIFICATE_SAMPLES: usize = 200_001;

#[derive(Debug, Clone, PartialEq)]
pub struct Nonlinearity {
    kind: NonlinearityKind,
    // ascending
    coeffs: Vec<f64>,
    dcoeffs: Vec<f64>,
}

impl Nonlinearity {
    pub fn new(kind: NonlinearityKind) -> Result<Self> {
        let coeffs = match &kind {
            NonlinearityKind::Cubic => vec![0.0, -1.0, 0.0, 1.0],
            NonlinearityKind::PlateauPoly { n } => {
                let mut p = vec![0.0, 1.0];
                for k in 1..=*n {
                    let k = k as f64;
                    // multiply by (u - k)^2 = u^2 - 2k u + k^2
                    p = poly_mul(&p, &[k * k, -2.0 * k, 1.0]);
                }
                p
            }
            NonlinearityKind::Custom { coefficients } => {
                if coefficients.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidArgument("non-finite coefficient".into()));
                }
                let mut c = coefficients.clone();
                while c.len() > 1 && c.last() == Some(&0.0) {
                    c.pop();
                }
                if c.is_empty() {
                    c.push(0.0);
                }
                c
            }
        };
        let dcoeffs = if coeffs.len() > 1 {
            coeffs.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect()
        } else {
            vec![0.0]
        };
        Ok(Nonlinearity {
            kind,
            coeffs,
            dcoeffs,
        })
    }

    pub fn cubic() -> Self {
        Self::new(NonlinearityKind::Cubic).expect("cubic is valid")
    }

    pub fn plateau(n: u32) -> Self {
        Self::new(NonlinearityKind::PlateauPoly { n }).expect("plateau is valid")
    }

    pub fn kind(&self) -> &NonlinearityKind {
        &self.kind
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    #[inline]
    pub fn eval(&self, u: f64) -> f64 {
        horner(&self.coeffs, u)
    }

    #[inline]
    pub fn derivative(&self, u: f64) -> f64 {
        horner(&self.dcoeffs, u)
    }

    /// Smallest `C` such that `f(u) u >= -C + |u|^{2+eps}` on the sampled
    /// range, provided the tail `|u| > CERTIFICATE_RANGE` is dominated by the
    /// leading term. `None` if `f` is not superlinear.
    pub fn certificate(&self, eps: f64) -> Option<SuperlinearityCertificate> {
        if !self.tail_is_superlinear(eps) {
            return None;
        }
        let mut worst = 0.0f64;
        for i in 0..CERTIFICATE_SAMPLES {
            let u = -CERTIFICATE_RANGE + 2.0 * CERTIFICATE_RANGE * i as f64 / (CERTIFICATE_SAMPLES - 1) as f64;
            worst = worst.max(u.abs().powf(2.0 + eps) - self.eval(u) * u);
        }
        // samples can miss the maximum between grid points
        Some(SuperlinearityCertificate {
            c: worst * 1.01 + 1e-9,
            eps,
        })
    }

    pub fn verify_certificate(&self, cert: &SuperlinearityCertificate) -> bool {
        if !(cert.eps > 0.0) || !self.tail_is_superlinear(cert.eps) {
            return false;
        }
        (0..CERTIFICATE_SAMPLES).all(|i| {
            let u = -CERTIFICATE_RANGE + 2.0 * CERTIFICATE_RANGE * i as f64 / (CERTIFICATE_SAMPLES - 1) as f64;
            self.eval(u) * u >= -cert.c + u.abs().powf(2.0 + cert.eps)
        })
    }

    fn tail_is_superlinear(&self, eps: f64) -> bool {
        let deg = self.degree();
        let lead = *self.coeffs.last().expect("nonempty");
        // f(u) u ~ lead u^{deg+1}: positive on both sides needs deg odd
        deg % 2 == 1 && lead > 0.0 && (deg + 1) as f64 > 2.0 + eps
    }

    /// Real zeros of `f`, sorted and without repetition.
    pub fn zeros(&self) -> Result<Vec<f64>> {
        match &self.kind {
            NonlinearityKind::Cubic => Ok(vec![-1.0, 0.0, 1.0]),
            NonlinearityKind::PlateauPoly { n } => Ok((0..=*n).map(|k| k as f64).collect()),
            NonlinearityKind::Custom { .. } => match self.coeffs.as_slice() {
                [c0] => Err(Error::UnsupportedNonlinearity(format!(
                    "constant polynomial {c0} has no isolated zeros"
                ))),
                [c0, c1] => Ok(vec![-c0 / c1]),
                [c, b, a] => {
                    let disc = b * b - 4.0 * a * c;
                    if disc < 0.0 {
                        Ok(vec![])
                    } else if disc == 0.0 {
                        Ok(vec![-b / (2.0 * a)])
                    } else {
                        let s = disc.sqrt();
                        // numerically stable pair
                        let q = -0.5 * (b + b.signum() * s);
                        let mut r = vec![q / a, c / q];
                        r.sort_by(f64::total_cmp);
                        Ok(r)
                    }
                }
                _ => Err(Error::UnsupportedNonlinearity(
                    "custom polynomials of degree >= 3 need a factored form".into(),
                )),
            },
        }
    }

    /// Exact or substepped solution of the reaction ODE `y' = -f(y)` after
    /// time `dt`, starting from `y0`.
    pub fn reaction_flow(&self, y0: f64, dt: f64) -> f64 {
        match self.kind {
            // y' = y - y^3, written so that y0 in {-1, 0, 1} is reproduced exactly
            NonlinearityKind::Cubic => {
                let y2 = y0 * y0;
                y0 / (y2 + (1.0 - y2) * (-2.0 * dt).exp()).sqrt()
            }
            _ => {
                let stiff = self.derivative(y0).abs() + self.eval(y0).abs() / (1.0 + y0.abs());
                let m = ((50.0 * dt * (1.0 + stiff)).ceil() as usize).clamp(1, 1_000_000);
                let h = dt / m as f64;
                let mut y = y0;
                for _ in 0..m {
                    let k1 = -self.eval(y);
                    let k2 = -self.eval(y + 0.5 * h * k1);
                    let k3 = -self.eval(y + 0.5 * h * k2);
                    let k4 = -self.eval(y + h * k3);
                    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                }
                y
            }
        }
    }
}

fn horner(c: &[f64], u: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * u + ci)
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plateau_coefficients_are_exact() {
        let f = Nonlinearity::plateau(2);
        assert_eq!(f.coefficients(), &[0.0, 4.0, -12.0, 13.0, -6.0, 1.0]);
        for k in 0..=2 {
            assert_eq!(f.eval(k as f64), 0.0);
        }
        assert_eq!(f.derivative(1.0), 0.0);
        assert_eq!(f.derivative(0.0), 4.0);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let f = Nonlinearity::plateau(3);
        for &u in &[-1.3, 0.2, 1.7, 2.9, 3.4] {
            let h = 1e-6;
            let fd = (f.eval(u + h) - f.eval(u - h)) / (2.0 * h);
            assert!((fd - f.derivative(u)).abs() < 1e-5 * (1.0 + fd.abs()));
        }
    }

    #[test]
    fn certificates() {
        for f in [Nonlinearity::cubic(), Nonlinearity::plateau(2)] {
            let cert = f.certificate(1.0).unwrap();
            assert!(f.verify_certificate(&cert));
            assert!(!f.verify_certificate(&SuperlinearityCertificate { c: -1.0, eps: 1.0 }));
        }
        let linear = Nonlinearity::new(NonlinearityKind::Custom { coefficients: vec![0.0, 1.0] }).unwrap();
        assert!(linear.certificate(1.0).is_none());
    }

    #[test]
    fn zeros() {
        assert_eq!(Nonlinearity::plateau(2).zeros().unwrap(), vec![0.0, 1.0, 2.0]);
        assert_eq!(Nonlinearity::cubic().zeros().unwrap(), vec![-1.0, 0.0, 1.0]);
        let lin = Nonlinearity::new(NonlinearityKind::Custom { coefficients: vec![0.0, 1.0] }).unwrap();
        assert_eq!(lin.zeros().unwrap(), vec![0.0]);
        let quad = Nonlinearity::new(NonlinearityKind::Custom { coefficients: vec![-2.0, -1.0, 1.0] }).unwrap();
        assert_eq!(quad.zeros().unwrap(), vec![-1.0, 2.0]);
        let cubic = Nonlinearity::new(NonlinearityKind::Custom { coefficients: vec![0.0, -1.0, 0.0, 1.0] }).unwrap();
        assert!(matches!(cubic.zeros(), Err(Error::UnsupportedNonlinearity(_))));
    }

    #[test]
    fn cubic_flow_matches_logistic_formula() {
        let f = Nonlinearity::cubic();
        let y0: f64 = 3.0;
        for t in [0.1f64, 1.0, 2.5] {
            let z = y0 * y0 * (2.0 * t).exp() / (1.0 + y0 * y0 * ((2.0 * t).exp() - 1.0));
            assert!((f.reaction_flow(y0, t) - z.sqrt()).abs() < 1e-14);
        }
        for y in [-1.0, 0.0, 1.0] {
            assert_eq!(f.reaction_flow(y, 0.37), y);
        }
    }

    #[test]
    fn rk4_flow_agrees_with_exact_cubic() {
        let exact = Nonlinearity::cubic();
        let custom = Nonlinearity::new(NonlinearityKind::Custom { coefficients: vec![0.0, -1.0, 0.0, 1.0] }).unwrap();
        for &y in &[-2.0, 0.3, 1.5, 5.0] {
            let a = exact.reaction_flow(y, 0.01);
            let b = custom.reaction_flow(y, 0.01);
            assert!((a - b).abs() < 1e-9, "{y}: {a} vs {b}");
        }
    }

    #[test]
    fn config_json_shape() {
        let k: NonlinearityKind = serde_json::from_str(r#"{"kind":"PlateauPoly","N":2}"#).unwrap();
        assert_eq!(k, NonlinearityKind::PlateauPoly { n: 2 });
        let k: NonlinearityKind = serde_json::from_str(r#"{"kind":"Cubic"}"#).unwrap();
        assert_eq!(k, NonlinearityKind::Cubic);
    }
}
