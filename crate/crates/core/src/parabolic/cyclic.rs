//! Periodic implicit diffusion `(I - r D2) x = b` along one lattice line, where
//! `D2` is the cyclic second-difference matrix.

/// Factorization of the cyclic tridiagonal system with diagonal `1 + 2r` and
/// off-diagonals `-r`, solved by the Thomas algorithm plus a Sherman-Morrison
/// correction for the corner entries.
#[derive(Debug, Clone)]
pub(crate) struct CyclicSolver {
    n: usize,
    off: f64,
    // modified forward-elimination coefficients and inverse pivots
    cp: Vec<f64>,
    inv_piv: Vec<f64>,
    z: Vec<f64>,
    v_last: f64,
    corr: f64,
}

impl CyclicSolver {
    /// `n >= 3` lattice points, diffusion number `r = dt / h^2 >= 0`.
    pub(crate) fn new(n: usize, r: f64) -> Self {
        assert!(n >= 3, "cyclic solver needs at least three points");
        let b = 1.0 + 2.0 * r;
        let off = -r;
        let gamma = -b;
        let mut diag = vec![b; n];
        diag[0] = b - gamma;
        diag[n - 1] = b - off * off / gamma;
        let mut cp = vec![0.0; n];
        let mut inv_piv = vec![0.0; n];
        inv_piv[0] = 1.0 / diag[0];
        cp[0] = off * inv_piv[0];
        for i in 1..n {
            inv_piv[i] = 1.0 / (diag[i] - off * cp[i - 1]);
            cp[i] = off * inv_piv[i];
        }
        let mut s = CyclicSolver {
            n,
            off,
            cp,
            inv_piv,
            z: Vec::new(),
            v_last: off / gamma,
            corr: 0.0,
        };
        let mut u = vec![0.0; n];
        u[0] = gamma;
        u[n - 1] = off;
        s.thomas(&mut u);
        s.corr = 1.0 / (1.0 + u[0] + s.v_last * u[n - 1]);
        s.z = u;
        s
    }

    fn thomas(&self, x: &mut [f64]) {
        let n = self.n;
        x[0] *= self.inv_piv[0];
        for i in 1..n {
            x[i] = (x[i] - self.off * x[i - 1]) * self.inv_piv[i];
        }
        for i in (0..n - 1).rev() {
            x[i] -= self.cp[i] * x[i + 1];
        }
    }

    /// Solves in place. The system maps constants to themselves, so the first
    /// entry is factored out first and constant lines are reproduced exactly.
    pub(crate) fn solve(&self, x: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        let c = x[0];
        x.iter_mut().for_each(|v| *v -= c);
        self.thomas(x);
        let k = (x[0] + self.v_last * x[self.n - 1]) * self.corr;
        for (v, z) in x.iter_mut().zip(&self.z) {
            *v += c - k * z;
        }
    }
}
