//! Gaussian density matrices of a single oscillator mode.
//!
//! The state is carried by the characteristic function
//!
//! ```text
//! rho(k, d) = Tr[rho exp(i k x + i d p)]
//!           = exp(-c1 k^2 - c2 k d - c3 d^2 - i c4 k - i c5 d - c6)
//! ```
//!
//! in the dimensionless frame where positions are measured in units of the
//! ground-state width `x0 = 1/sqrt(2 m w)` and momenta in units of `1/x0`.
//! In that frame `<x> = -c4`, `<p> = -c5`, `Var x = 2 c1`, `Var p = 2 c3` and
//! the symmetrised covariance is `c2`, so the oscillator ground state reads
//! `(1/2, 0, 1/8, 0, 0, 0)`.
//!
//! The symmetric quadrature frame (`x = (a + a^dag)/sqrt 2`,
//! `p = -i (a - a^dag)/sqrt 2`) is reachable through
//! [`GaussianCVector::to_symmetric_frame`]; coherent and thermal states have
//! `c1 = c3` there.

use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use crate::error::{Error, Result};

/// Tolerance on `4 c1 c3 - c2^2 - 1/4` below which a state counts as pure.
pub const PURITY_TOLERANCE: f64 = 1e-10;

/// Six real parameters of the Gaussian characteristic function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianCVector {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    /// Log-normalisation; zero for every trace-one state.
    pub c6: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    NonFinite,
    NonPositiveC1(f64),
    NonPositiveC3(f64),
    /// `4 c1 c3 - c2^2` below `1/4`: the uncertainty relation is broken.
    SubHeisenberg(f64),
    /// `c6 != 0`, the state does not have unit trace.
    Unnormalized(f64),
}

/// Outcome of [`GaussianCVector::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Validity {
    pub violations: Vec<Violation>,
    /// `4 c1 c3 - c2^2`, the determinant of the covariance matrix.
    pub covariance_det: f64,
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn is_pure(&self) -> bool {
        self.is_valid() && (self.covariance_det - 0.25).abs() < PURITY_TOLERANCE
    }
}

/// Eigenvalues `lambda_0..lambda_nmax` together with the analytic weight of
/// the geometric tail beyond `nmax`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Geometric ratio `nbar / (nbar + 1)`.
    pub ratio: f64,
    /// `sum_{n > nmax} lambda_n`.
    pub tail: f64,
}

impl Spectrum {
    pub fn total(&self) -> f64 {
        self.eigenvalues.iter().sum::<f64>() + self.tail
    }
}

/// Coefficients of the position-representation kernel
///
/// ```text
/// rho(x, y) = exp(-A (x-y)^2 - i B (x-y)(x+y) - C (x+y)^2 - i D (x-y) - E (x+y) - N)
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionKernel {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub n: f64,
}

impl PositionKernel {
    /// `A >= C > 0`; anything else has negative or vanishing eigenvalues.
    pub fn check(&self) -> Result<()> {
        let finite = [self.a, self.b, self.c, self.d, self.e, self.n]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidState("non-finite kernel coefficient".into()));
        }
        if self.c <= 0.0 {
            return Err(Error::InvalidState(format!("kernel C={} must be positive", self.c)));
        }
        if self.a < self.c * (1.0 - 1e-12) {
            return Err(Error::InvalidState(format!(
                "kernel A={} < C={}: negative eigenvalues",
                self.a, self.c
            )));
        }
        Ok(())
    }

    /// Kernel value `rho(x, y)`.
    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        let dif = x - y;
        let sum = x + y;
        let re = -self.a * dif * dif - self.c * sum * sum - self.e * sum - self.n;
        let im = -self.b * dif * sum - self.d * dif;
        Complex64::from_polar(re.exp(), im)
    }

    /// The trace-one value of `N` for the given `C` and `E`.
    pub fn normalizing_n(c: f64, e: f64) -> f64 {
        e * e / (4.0 * c) + 0.5 * (PI / (4.0 * c)).ln()
    }
}

/// Displaced squeezed thermal state parameters read off the symmetric
/// characteristic function `chi(l, l*)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DstsParams {
    pub nbar: f64,
    /// Coefficient multiplying `-l^2` in the exponent of `chi`.
    pub squeezing: Complex64,
    /// Coefficient multiplying `+l` in the exponent of `chi`.
    pub displacement: Complex64,
}

impl GaussianCVector {
    pub const GROUND: GaussianCVector = GaussianCVector {
        c1: 0.5,
        c2: 0.0,
        c3: 0.125,
        c4: 0.0,
        c5: 0.0,
        c6: 0.0,
    };

    /// Trace-one state (`c6 = 0`).
    pub fn new(c1: f64, c2: f64, c3: f64, c4: f64, c5: f64) -> Self {
        GaussianCVector { c1, c2, c3, c4, c5, c6: 0.0 }
    }

    pub fn from_array(c: [f64; 6]) -> Self {
        GaussianCVector { c1: c[0], c2: c[1], c3: c[2], c4: c[3], c5: c[4], c6: c[5] }
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.c1, self.c2, self.c3, self.c4, self.c5, self.c6]
    }

    /// Pins `c6` to zero. Returns the dropped value when it was non-zero so
    /// callers can report the renormalisation.
    pub fn trace_normalized(self) -> (Self, Option<f64>) {
        if self.c6 == 0.0 {
            (self, None)
        } else {
            (GaussianCVector { c6: 0.0, ..self }, Some(self.c6))
        }
    }

    pub fn covariance_det(&self) -> f64 {
        4.0 * self.c1 * self.c3 - self.c2 * self.c2
    }

    pub fn validate(&self) -> Validity {
        let mut violations = Vec::new();
        let det = self.covariance_det();
        if !self.to_array().iter().all(|v| v.is_finite()) {
            violations.push(Violation::NonFinite);
            return Validity { violations, covariance_det: det };
        }
        if self.c1 <= 0.0 {
            violations.push(Violation::NonPositiveC1(self.c1));
        }
        if self.c3 <= 0.0 {
            violations.push(Violation::NonPositiveC3(self.c3));
        }
        if det < 0.25 - PURITY_TOLERANCE {
            violations.push(Violation::SubHeisenberg(det));
        }
        if self.c6 != 0.0 {
            violations.push(Violation::Unnormalized(self.c6));
        }
        Validity { violations, covariance_det: det }
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidState(format!("{:?}: {:?}", self.to_array(), v.violations)))
        }
    }

    /// Mean excitation number of the unitarily equivalent thermal state.
    pub fn nbar(&self) -> Result<f64> {
        self.ensure_valid()?;
        Ok(nbar_unchecked(self))
    }

    pub fn spectrum(&self, n_max: usize) -> Result<Spectrum> {
        let nbar = self.nbar()?;
        let ratio = nbar / (nbar + 1.0);
        let lambda0 = 1.0 / (nbar + 1.0);
        let mut eigenvalues = Vec::with_capacity(n_max + 1);
        let mut v = lambda0;
        for _ in 0..=n_max {
            eigenvalues.push(v);
            v *= ratio;
        }
        let tail = ratio.powi(n_max as i32 + 1);
        Ok(Spectrum { eigenvalues, ratio, tail })
    }

    pub fn to_position_kernel(&self) -> Result<PositionKernel> {
        if !(self.c1 > 0.0) {
            return Err(Error::InvalidState(format!("c1={} must be positive", self.c1)));
        }
        let c1 = self.c1;
        let a = self.c3 - self.c2 * self.c2 / (4.0 * c1);
        let b = -self.c2 / (4.0 * c1);
        let c = 1.0 / (16.0 * c1);
        let d = -(self.c2 * self.c4 / (2.0 * c1) - self.c5);
        let e = self.c4 / (4.0 * c1);
        let n = PositionKernel::normalizing_n(c, e) + self.c6;
        Ok(PositionKernel { a, b, c, d, e, n })
    }

    pub fn from_position_kernel(k: &PositionKernel) -> Result<Self> {
        if !(k.c > 0.0) {
            return Err(Error::InvalidState(format!("kernel C={} must be positive", k.c)));
        }
        let c1 = 1.0 / (16.0 * k.c);
        let c2 = -k.b / (4.0 * k.c);
        let c3 = k.a + k.b * k.b / (4.0 * k.c);
        let c4 = k.e / (4.0 * k.c);
        let c5 = k.d + c2 * c4 / (2.0 * c1);
        let c6 = k.n - PositionKernel::normalizing_n(k.c, k.e);
        Ok(GaussianCVector { c1, c2, c3, c4, c5, c6 })
    }

    /// Coefficients in the symmetric quadrature frame.
    pub fn to_symmetric_frame(&self) -> [f64; 6] {
        [
            self.c1 / 2.0,
            self.c2,
            self.c3 * 2.0,
            self.c4 * FRAC_1_SQRT_2,
            self.c5 * SQRT_2,
            self.c6,
        ]
    }

    pub fn from_symmetric_frame(c: [f64; 6]) -> Self {
        GaussianCVector {
            c1: c[0] * 2.0,
            c2: c[1],
            c3: c[2] / 2.0,
            c4: c[3] * SQRT_2,
            c5: c[4] * FRAC_1_SQRT_2,
            c6: c[5],
        }
    }

    pub fn dsts_params(&self) -> Result<DstsParams> {
        let nbar = self.nbar()?;
        let s = self.to_symmetric_frame();
        Ok(DstsParams {
            nbar,
            squeezing: Complex64::new((-s[0] + s[2]) / 2.0, s[1] / 2.0),
            displacement: Complex64::new(-s[3], s[4]) * FRAC_1_SQRT_2,
        })
    }
}

pub(crate) fn nbar_unchecked(c: &GaussianCVector) -> f64 {
    (c.covariance_det().max(0.25).sqrt() - 0.5).max(0.0)
}

/// Coherent state `|alpha>`: `chi = exp(l alpha* - l* alpha - |l|^2/2)`.
pub fn coherent_state(alpha: Complex64) -> GaussianCVector {
    GaussianCVector::from_symmetric_frame([
        0.25,
        0.0,
        0.25,
        -SQRT_2 * alpha.re,
        -SQRT_2 * alpha.im,
        0.0,
    ])
}

pub fn thermal_state(nbar: f64) -> Result<GaussianCVector> {
    if !(nbar >= 0.0) || !nbar.is_finite() {
        return Err(Error::InvalidArgument(format!("occupation {nbar} must be >= 0")));
    }
    let w = (2.0 * nbar + 1.0) / 4.0;
    Ok(GaussianCVector::from_symmetric_frame([w, 0.0, w, 0.0, 0.0, 0.0]))
}
