//! Eigensystem of the position-representation kernel.
//!
//! For `rho(x, y)` with coefficients `A >= C > 0` the eigenvalues form a
//! geometric sequence `eps0 * eps^n` and the eigenfunctions are generalized
//! Hermite polynomials times a complex Gaussian envelope.

use crate::error::{Error, Result};
use crate::gaussian_state::PositionKernel;
use num_complex::Complex64;
use std::f64::consts::PI;

/// `H_n(x, a)` from the three-term recurrence
/// `H_{n+1} = 2x H_n - 2 n a H_{n-1}`.
pub fn generalized_hermite(n: usize, x: f64, a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::InvalidArgument(format!("hermite width a={a} must be positive")));
    }
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * a * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Gauss–Legendre rule mapped onto a finite window.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    pub lo: f64,
    pub hi: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureGrid {
    pub fn new(lo: f64, hi: f64, points: usize) -> Result<Self> {
        if !(hi > lo) || points < 2 {
            return Err(Error::InvalidArgument(format!("bad quadrature window [{lo}, {hi}] with {points} points")));
        }
        let (t, w) = gauss_legendre(points);
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        Ok(QuadratureGrid {
            lo,
            hi,
            nodes: t.iter().map(|t| mid + half * t).collect(),
            weights: w.iter().map(|w| half * w).collect(),
        })
    }

    /// Window centred on the kernel diagonal, wide enough for eigenfunctions
    /// up to `n_max`.
    pub fn for_eigensystem(sys: &EigenSystem, n_max: usize, points: usize) -> Result<Self> {
        let half = (8.0 + 2.0 * ((2 * n_max + 1) as f64).sqrt()) * sys.sigma_eff;
        QuadratureGrid::new(sys.center - half, sys.center + half, points)
    }

    /// Same centre, twice the width and twice the nodes.
    pub fn doubled(&self) -> Result<Self> {
        let mid = 0.5 * (self.hi + self.lo);
        let half = self.hi - self.lo;
        QuadratureGrid::new(mid - half, mid + half, 2 * self.nodes.len())
    }

    pub fn integrate<F: FnMut(f64) -> Complex64>(&self, mut f: F) -> Complex64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| f(x) * w).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub eps0: f64,
    pub eps: f64,
    pub n_max: usize,
    /// Hermite argument shift: `phi_n` uses `H_n(x + kappa, a)`.
    pub kappa: f64,
    /// Hermite width `a = 1/(4 sqrt(AC))`.
    pub a: f64,
    /// Envelope `exp(quad x^2 + lin x + offset)`.
    pub quad: Complex64,
    pub lin: Complex64,
    /// Restores unit norm when the diagonal is not centred on the origin.
    pub offset: f64,
    /// Normalization prefactors of `H_n(x + kappa, a)` for a centred kernel.
    pub norms: Vec<f64>,
    /// Centre of the diagonal `rho(x, x)`.
    pub center: f64,
    /// Width `(16AC)^(-1/4)` used to size quadrature windows.
    pub sigma_eff: f64,
}

impl EigenSystem {
    pub fn eigenvalue(&self, n: usize) -> f64 {
        if self.eps == 0.0 {
            return if n == 0 { self.eps0 } else { 0.0 };
        }
        self.eps0 * self.eps.powi(n as i32)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        (0..=self.n_max).map(|n| self.eigenvalue(n)).collect()
    }

    fn envelope(&self, x: f64) -> Complex64 {
        (self.quad * x * x + self.lin * x + self.offset).exp()
    }

    /// All normalized `phi_0 .. phi_n_max` at `x`. Uses the recurrence for
    /// Hermite functions normalized in the scaled variable, which stays
    /// bounded for large `n`.
    pub fn eigenfunctions_at(&self, x: f64) -> Vec<Complex64> {
        let t = x + self.kappa;
        let pref = (self.a * PI).powf(-0.25);
        let env = self.envelope(x) * pref;
        let mut out = Vec::with_capacity(self.n_max + 1);
        let (mut prev, mut cur) = (0.0, 1.0);
        for k in 0..=self.n_max {
            out.push(env * cur);
            let next = t * (2.0 / ((k + 1) as f64 * self.a)).sqrt() * cur
                - (k as f64 / (k + 1) as f64).sqrt() * prev;
            prev = cur;
            cur = next;
        }
        out
    }

    pub fn eigenfunction(&self, n: usize, x: f64) -> Result<Complex64> {
        if n > self.n_max {
            return Err(Error::InvalidArgument(format!("n={n} exceeds n_max={}", self.n_max)));
        }
        Ok(self.eigenfunctions_at(x)[n])
    }

    /// Copy with a different Hermite shift, for checking candidate shifts
    /// against the eigen-equation.
    pub fn with_shift(&self, kappa: f64) -> Self {
        EigenSystem { kappa, ..self.clone() }
    }
}

/// Solves `int rho(x, y) phi_n(y) dy = eps_n phi_n(x)` in closed form.
pub fn eigendecompose(kernel: &PositionKernel, n_max: usize) -> Result<EigenSystem> {
    kernel.check()?;
    let PositionKernel { a: ka, b, c, d, e, n } = *kernel;
    let ka = ka.max(c);
    let (sa, sc) = (ka.sqrt(), c.sqrt());
    // trace of the kernel relative to a unit-trace one
    let weight = (PositionKernel::normalizing_n(c, e) - n).exp();
    let eps0 = weight * 2.0 * sc / (sa + sc);
    let eps = (sa - sc) / (sa + sc);
    let root_ac = sa * sc;
    let a = 1.0 / (4.0 * root_ac);
    let ln_16ac = (16.0 * ka * c).ln();
    let mut ln_fact = 0.0;
    let norms = (0..=n_max)
        .map(|k| {
            if k > 0 {
                ln_fact += (k as f64).ln();
            }
            let ln = (2 * k + 1) as f64 / 4.0 * ln_16ac - 0.5 * PI.ln() - k as f64 * 2f64.ln() - ln_fact;
            (0.5 * ln).exp()
        })
        .collect();
    Ok(EigenSystem {
        eps0,
        eps,
        n_max,
        kappa: e / (4.0 * c),
        a,
        quad: Complex64::new(-2.0 * root_ac, -b),
        lin: Complex64::new(-(ka / c).sqrt() * e, -d),
        offset: -(ka / c).sqrt() * e * e / (8.0 * c),
        norms,
        center: -e / (4.0 * c),
        sigma_eff: (16.0 * ka * c).powf(-0.25),
    })
}

fn residual_on(kernel: &PositionKernel, sys: &EigenSystem, n: usize, grid: &QuadratureGrid, points: &[f64]) -> f64 {
    let phi: Vec<Complex64> = grid.nodes.iter().map(|&y| sys.eigenfunctions_at(y)[n]).collect();
    let eps_n = sys.eigenvalue(n);
    let (mut worst, mut scale) = (0.0f64, 0.0f64);
    for &x in points {
        let lhs: Complex64 = grid
            .nodes
            .iter()
            .zip(&grid.weights)
            .zip(&phi)
            .map(|((&y, &w), p)| kernel.eval(x, y) * p * w)
            .sum();
        let rhs = sys.eigenfunctions_at(x)[n] * eps_n;
        worst = worst.max((lhs - rhs).norm());
        scale = scale.max(rhs.norm());
    }
    if scale == 0.0 {
        worst
    } else {
        worst / scale
    }
}

/// `max |int rho(x, y) phi_n(y) dy - eps_n phi_n(x)| / max |eps_n phi_n|`
/// at 257 equispaced points of the window. The computation is repeated on a doubled grid; a change
/// above `1e-10` means the grid does not resolve the integrand.
pub fn verify_eigenpair(kernel: &PositionKernel, sys: &EigenSystem, n: usize, grid: &QuadratureGrid) -> Result<f64> {
    if n > sys.n_max {
        return Err(Error::InvalidArgument(format!("n={n} exceeds n_max={}", sys.n_max)));
    }
    let points: Vec<f64> = (0..=256).map(|i| grid.lo + (grid.hi - grid.lo) * i as f64 / 256.0).collect();
    let r = residual_on(kernel, sys, n, grid, &points);
    let r2 = residual_on(kernel, sys, n, &grid.doubled()?, &points);
    if !r.is_finite() || (r - r2).abs() > 1e-10 {
        return Err(Error::Quadrature(format!(
            "residual moved from {r:e} to {r2:e} when the grid was doubled"
        )));
    }
    Ok(r)
}

/// `G[m][n] = int conj(phi_m) phi_n dx` on the grid.
pub fn gram_matrix(sys: &EigenSystem, grid: &QuadratureGrid) -> Vec<Vec<Complex64>> {
    let k = sys.n_max + 1;
    let mut g = vec![vec![Complex64::new(0.0, 0.0); k]; k];
    for (&x, &w) in grid.nodes.iter().zip(&grid.weights) {
        let phi = sys.eigenfunctions_at(x);
        for m in 0..k {
            for n in 0..k {
                g[m][n] += phi[m].conj() * phi[n] * w;
            }
        }
    }
    g
}
