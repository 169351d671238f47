//! Model coefficients and time evolution of the Gaussian parameters.
//!
//! All quantities are dimensionless: rates in units of the oscillator
//! frequency `w`, time `tau = w t`, diffusion coefficients scaled with the
//! ground-state width `x0 = 1/sqrt(2 m w)`:
//!
//! ```text
//! D'pp = Dpp x0^2 / w,  gamma' = gamma / w,  D'xx = Dxx / (w x0^2),  D'px = Dpx / w
//! ```
//!
//! In these units the parameters obey
//!
//! ```text
//! c1' = D'xx + 2 c2
//! c2' = 2 D'px + 4 c3 - c1 - 2 gamma' c2
//! c3' = D'pp - c2 / 2 - 4 gamma' c3
//! c4' = 2 c5
//! c5' = -c4 / 2 - 2 gamma' c5
//! c6' = 0
//! ```

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian_state::GaussianCVector;

/// Below this `|gamma'^2 - 1|` the closed-form solution is replaced by RK4.
pub const DEGENERACY_THRESHOLD: f64 = 1e-6;

/// Imaginary leftovers of the closed form allowed before it is declared broken.
const IMAG_RESIDUE_TOLERANCE: f64 = 1e-9;

const DEKKER_TOLERANCE: f64 = 1e-12;

/// Temperature and cutoff that generated a high-temperature coefficient set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighTempParams {
    /// `T' = k_B T / w`.
    pub temperature: f64,
    /// `w / Omega`, oscillator frequency over bath cutoff.
    pub omega_ratio: f64,
}

impl HighTempParams {
    /// The coefficients are derived assuming `T' >> 1`; this is the cut used
    /// to flag sets outside that regime.
    pub fn is_high_temperature(&self) -> bool {
        self.temperature >= 10.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scale {
    pub mass: f64,
    pub omega: f64,
}

impl Scale {
    pub fn new(mass: f64, omega: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite() && omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "mass={mass} and omega={omega} must be positive"
            )));
        }
        Ok(Scale { mass, omega })
    }

    /// Squared ground-state width `1 / (2 m w)`.
    pub fn x0_sq(&self) -> f64 {
        1.0 / (2.0 * self.mass * self.omega)
    }
}

/// `gamma'`, `D'pp` and `D'px`: everything except the unknown `D'xx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathCoefficients {
    pub gamma: f64,
    pub dpp: f64,
    pub dpx: f64,
    pub high_temp: Option<HighTempParams>,
}

/// Full dimensionless coefficient set of the master equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelCoefficients {
    pub gamma: f64,
    pub dpp: f64,
    pub dpx: f64,
    pub dxx: f64,
    pub high_temp: Option<HighTempParams>,
    /// Present when the set was built from dimensionful input.
    pub scale: Option<Scale>,
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidCoefficients(format!("{name}={v} must be finite and >= 0")))
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_finite() && gamma > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidCoefficients(format!("gamma'={gamma} must be finite and > 0")))
    }
}

impl BathCoefficients {
    pub fn new(gamma: f64, dpp: f64, dpx: f64) -> Result<Self> {
        check_gamma(gamma)?;
        check_nonneg("D'pp", dpp)?;
        check_nonneg("D'px", dpx)?;
        Ok(BathCoefficients { gamma, dpp, dpx, high_temp: None })
    }

    pub fn with_dxx(&self, dxx: f64) -> Result<ModelCoefficients> {
        check_nonneg("D'xx", dxx)?;
        Ok(ModelCoefficients {
            gamma: self.gamma,
            dpp: self.dpp,
            dpx: self.dpx,
            dxx,
            high_temp: self.high_temp,
            scale: None,
        })
    }
}

impl ModelCoefficients {
    pub fn new(gamma: f64, dpp: f64, dpx: f64, dxx: f64) -> Result<Self> {
        BathCoefficients::new(gamma, dpp, dpx)?.with_dxx(dxx)
    }

    pub fn bath(&self) -> BathCoefficients {
        BathCoefficients {
            gamma: self.gamma,
            dpp: self.dpp,
            dpx: self.dpx,
            high_temp: self.high_temp,
        }
    }

    /// Same bath, different `D'xx`.
    pub fn with_dxx(&self, dxx: f64) -> Result<Self> {
        check_nonneg("D'xx", dxx)?;
        Ok(ModelCoefficients { dxx, ..*self })
    }

    pub fn is_cp_valid(&self) -> bool {
        dekker_check(self).satisfied
    }
}

/// High-temperature Caldeira-Leggett coefficients in dimensionless form:
/// `D'pp = gamma' T'`, `D'px = gamma' T' (w/Omega)`.
pub fn high_temp_coefficients(gamma: f64, temperature: f64, omega_ratio: f64) -> Result<BathCoefficients> {
    check_gamma(gamma)?;
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::InvalidCoefficients(format!("T'={temperature} must be > 0")));
    }
    if !(omega_ratio > 0.0 && omega_ratio < 1.0) {
        return Err(Error::InvalidCoefficients(format!(
            "w/Omega={omega_ratio} must lie in (0, 1)"
        )));
    }
    let dpp = gamma * temperature;
    Ok(BathCoefficients {
        gamma,
        dpp,
        dpx: dpp * omega_ratio,
        high_temp: Some(HighTempParams { temperature, omega_ratio }),
    })
}

/// Smallest `D'xx` allowed by `D'pp D'xx - D'px^2 >= gamma'^2 / 4`.
pub fn dekker_min(bath: &BathCoefficients) -> Result<f64> {
    if !(bath.dpp > 0.0) {
        return Err(Error::InvalidCoefficients("D'pp = 0: Dekker bound undefined".into()));
    }
    Ok(bath.gamma * bath.gamma / (4.0 * bath.dpp) + bath.dpx * bath.dpx / bath.dpp)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DekkerCheck {
    pub satisfied: bool,
    /// `D'pp D'xx - D'px^2 - gamma'^2 / 4`.
    pub slack: f64,
}

pub fn dekker_check(m: &ModelCoefficients) -> DekkerCheck {
    let slack = m.dpp * m.dxx - m.dpx * m.dpx - m.gamma * m.gamma / 4.0;
    DekkerCheck { satisfied: slack >= -DEKKER_TOLERANCE, slack }
}

pub fn steady_state(m: &ModelCoefficients) -> Result<GaussianCVector> {
    check_gamma(m.gamma)?;
    Ok(steady_state_unchecked(m))
}

pub(crate) fn steady_state_unchecked(m: &ModelCoefficients) -> GaussianCVector {
    let g = m.gamma;
    GaussianCVector::new(
        (4.0 * m.dpp + m.dxx * (4.0 * g * g + 1.0) + 8.0 * g * m.dpx) / (4.0 * g),
        -m.dxx / 2.0,
        (4.0 * m.dpp + m.dxx) / (16.0 * g),
        0.0,
        0.0,
    )
}

/// Right-hand side of the linear equations of motion.
pub fn time_derivative(m: &ModelCoefficients, c: &GaussianCVector) -> GaussianCVector {
    let g = m.gamma;
    GaussianCVector {
        c1: m.dxx + 2.0 * c.c2,
        c2: 2.0 * m.dpx + 4.0 * c.c3 - c.c1 - 2.0 * g * c.c2,
        c3: m.dpp - c.c2 / 2.0 - 4.0 * g * c.c3,
        c4: 2.0 * c.c5,
        c5: -c.c4 / 2.0 - 2.0 * g * c.c5,
        c6: 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Analytic,
    Numeric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagationResult {
    pub times: Vec<f64>,
    pub states: Vec<GaussianCVector>,
    pub method: Method,
    /// Set when `gamma'` sat on the critically damped point and the closed
    /// form was replaced by the numeric integrator.
    pub degenerate: bool,
}

impl PropagationResult {
    pub fn last(&self) -> Option<&GaussianCVector> {
        self.states.last()
    }
}

fn check_grid(taus: &[f64]) -> Result<()> {
    let mut prev = f64::NEG_INFINITY;
    for &t in taus {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::InvalidArgument(format!("tau={t} must be finite and >= 0")));
        }
        if t <= prev {
            return Err(Error::InvalidArgument("tau grid must be strictly increasing".into()));
        }
        prev = t;
    }
    Ok(())
}

fn check_state(tau: f64, c: &GaussianCVector) -> Result<()> {
    let v = c.validate();
    if v.is_valid() {
        Ok(())
    } else {
        Err(Error::Propagation {
            tau,
            reason: format!("state {:?} left the physical region: {:?}", c.to_array(), v.violations),
        })
    }
}

/// `min(1e-3, 1e-2 / gamma')`.
pub fn default_step(m: &ModelCoefficients) -> f64 {
    1e-3f64.min(1e-2 / m.gamma)
}

/// Closed-form propagation (Laplace-transform solution).
///
/// The critically damped point `|gamma'^2 - 1| < 1e-6` is handed to
/// [`propagate_numeric`] with the default step and flagged as degenerate.
pub fn propagate_analytic(
    state0: &GaussianCVector,
    m: &ModelCoefficients,
    taus: &[f64],
) -> Result<PropagationResult> {
    state0.ensure_valid()?;
    check_gamma(m.gamma)?;
    check_grid(taus)?;
    if (m.gamma * m.gamma - 1.0).abs() < DEGENERACY_THRESHOLD {
        let mut r = propagate_numeric(state0, m, taus, default_step(m))?;
        r.degenerate = true;
        return Ok(r);
    }
    let mut states = Vec::with_capacity(taus.len());
    for &tau in taus {
        let c = analytic_state(state0, m, tau)?;
        check_state(tau, &c)?;
        states.push(c);
    }
    Ok(PropagationResult {
        times: taus.to_vec(),
        states,
        method: Method::Analytic,
        degenerate: false,
    })
}

fn real_part(tau: f64, z: Complex64) -> Result<f64> {
    if z.im.abs() > IMAG_RESIDUE_TOLERANCE * z.re.abs().max(1.0) {
        return Err(Error::Propagation {
            tau,
            reason: format!("closed form left imaginary residue {:e}", z.im),
        });
    }
    Ok(z.re)
}

/// Evaluates the closed-form solution at a single `tau`. Requires
/// `gamma'^2 != 1`.
pub(crate) fn analytic_state(c0: &GaussianCVector, m: &ModelCoefficients, tau: f64) -> Result<GaussianCVector> {
    if tau == 0.0 {
        return Ok(*c0);
    }
    let g = m.gamma;
    let (dpp, dpx, dxx) = (m.dpp, m.dpx, m.dxx);
    let (c10, c20, c30, c40, c50) = (c0.c1, c0.c2, c0.c3, c0.c4, c0.c5);
    let one = Complex64::new(1.0, 0.0);
    // Omega_d^2 = gamma'^2 - 1, imaginary when underdamped
    let wd = Complex64::new(g * g - 1.0, 0.0).sqrt();
    let wd2 = g * g - 1.0;
    let e2g = (-2.0 * g * tau).exp();
    let st = steady_state_unchecked(m);

    let mut c1 = Complex64::new(st.c1, 0.0)
        + e2g / (4.0 * g * wd2) * (4.0 * dpp + dxx + 4.0 * g * dpx - 2.0 * g * (c10 + 2.0 * g * c20 + 4.0 * c30));
    let mut c2 = Complex64::new(st.c2, 0.0)
        + e2g / (4.0 * wd2) * (-4.0 * dpp - dxx + 2.0 * g * (c10 + 2.0 * g * c20 + 4.0 * c30 - 2.0 * dpx));
    let mut c3 = Complex64::new(st.c3, 0.0)
        + e2g / (16.0 * g * wd2) * (4.0 * dpp + dxx - 2.0 * g * (c10 + 2.0 * g * c20 + 4.0 * c30 - 2.0 * dpx));

    for y in [wd, -wd] {
        let gy = g + y;
        let den = gy * y * y;
        let ex = (-2.0 * gy * tau).exp();
        let gm = g - y;
        let q = one - 2.0 * g * g - 2.0 * g * y;

        c1 += ((-4.0 * dpp + dxx * (1.0 - 2.0 * g * g + 2.0 * g * y) + 2.0 * c10 * gm) / (8.0 * den)
            + (2.0 * c30 * gy + c20 - dpx * gm) / (2.0 * den))
            * ex;
        c2 += ex
            * (c30 * q / den
                + (4.0 * dpp * gy + dxx * gm + 4.0 * dpx - 2.0 * c10 - 4.0 * c20 * gy) / (8.0 * den));
        c3 += ex
            * ((4.0 * dpp * q - dxx + 2.0 * c10 * gy) / (32.0 * den)
                - (dpx * gy + c20 * q + 2.0 * c30 * (3.0 * g + y - 4.0 * g * g * g - 4.0 * g * g * y))
                    / (8.0 * den));
    }

    let em = (-(g + wd) * tau).exp();
    let ep = (-(g - wd) * tau).exp();
    let c4 = em * (c40 * (wd - g) - 2.0 * c50) / (2.0 * wd) + ep * (c40 * (g + wd) + 2.0 * c50) / (2.0 * wd);
    let c5 = em * (2.0 * c50 * (g + wd) + c40) / (4.0 * wd) + ep * (2.0 * c50 * (wd - g) - c40) / (4.0 * wd);

    Ok(GaussianCVector {
        c1: real_part(tau, c1)?,
        c2: real_part(tau, c2)?,
        c3: real_part(tau, c3)?,
        c4: real_part(tau, c4)?,
        c5: real_part(tau, c5)?,
        c6: c0.c6,
    })
}

fn axpy(a: f64, x: &GaussianCVector, y: &GaussianCVector) -> GaussianCVector {
    GaussianCVector {
        c1: y.c1 + a * x.c1,
        c2: y.c2 + a * x.c2,
        c3: y.c3 + a * x.c3,
        c4: y.c4 + a * x.c4,
        c5: y.c5 + a * x.c5,
        c6: y.c6 + a * x.c6,
    }
}

fn rk4_step(m: &ModelCoefficients, y: &GaussianCVector, h: f64) -> GaussianCVector {
    let k1 = time_derivative(m, y);
    let k2 = time_derivative(m, &axpy(h / 2.0, &k1, y));
    let k3 = time_derivative(m, &axpy(h / 2.0, &k2, y));
    let k4 = time_derivative(m, &axpy(h, &k3, y));
    let mut out = axpy(h / 6.0, &k1, y);
    out = axpy(h / 3.0, &k2, &out);
    out = axpy(h / 3.0, &k3, &out);
    axpy(h / 6.0, &k4, &out)
}

fn integrate(state0: &GaussianCVector, m: &ModelCoefficients, taus: &[f64], step: f64) -> Result<Vec<GaussianCVector>> {
    let mut out = Vec::with_capacity(taus.len());
    let mut y = *state0;
    let mut t = 0.0;
    for &target in taus {
        let span = target - t;
        if span > 0.0 {
            let n = (span / step).ceil().max(1.0) as usize;
            let h = span / n as f64;
            for _ in 0..n {
                y = rk4_step(m, &y, h);
            }
        }
        t = target;
        check_state(target, &y)?;
        out.push(y);
    }
    Ok(out)
}

/// Classic fourth-order Runge-Kutta on the six linear equations, landing
/// exactly on every grid point. If a state leaves the physical region the
/// step is halved, at most ten times.
pub fn propagate_numeric(
    state0: &GaussianCVector,
    m: &ModelCoefficients,
    taus: &[f64],
    step: f64,
) -> Result<PropagationResult> {
    state0.ensure_valid()?;
    check_grid(taus)?;
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidArgument(format!("step={step} must be positive")));
    }
    let mut h = step;
    let mut last_err = None;
    for _ in 0..=10 {
        match integrate(state0, m, taus, h) {
            Ok(states) => {
                return Ok(PropagationResult {
                    times: taus.to_vec(),
                    states,
                    method: Method::Numeric,
                    degenerate: false,
                })
            }
            Err(e) => {
                last_err = Some(e);
                h /= 2.0;
            }
        }
    }
    match last_err {
        Some(Error::Propagation { tau, reason }) => Err(Error::Propagation {
            tau,
            reason: format!("{reason} (step halved 10 times, last step {h:e})"),
        }),
        Some(e) => Err(e),
        None => unreachable!(),
    }
}

/// Dimensionful coefficients of the master equation (hbar = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawCoefficients {
    pub gamma: f64,
    pub dpp: f64,
    pub dpx: f64,
    pub dxx: f64,
    pub mass: f64,
    pub omega: f64,
}

pub fn nondimensionalize(raw: &RawCoefficients) -> Result<ModelCoefficients> {
    let scale = Scale::new(raw.mass, raw.omega)?;
    let x0_sq = scale.x0_sq();
    let w = raw.omega;
    let mut m = ModelCoefficients::new(raw.gamma / w, raw.dpp * x0_sq / w, raw.dpx / w, raw.dxx / (w * x0_sq))?;
    m.scale = Some(scale);
    Ok(m)
}

pub fn redimensionalize(m: &ModelCoefficients) -> Result<RawCoefficients> {
    let scale = m
        .scale
        .ok_or_else(|| Error::InvalidArgument("coefficients carry no mass/frequency scale".into()))?;
    let x0_sq = scale.x0_sq();
    let w = scale.omega;
    Ok(RawCoefficients {
        gamma: m.gamma * w,
        dpp: m.dpp * w / x0_sq,
        dpx: m.dpx * w,
        dxx: m.dxx * w * x0_sq,
        mass: scale.mass,
        omega: scale.omega,
    })
}

/// Maps dimensionful `c1..c6` to the dimensionless frame.
pub fn dimensionless_state(raw: [f64; 6], scale: &Scale) -> GaussianCVector {
    let x0_sq = scale.x0_sq();
    let x0 = x0_sq.sqrt();
    GaussianCVector::from_array([raw[0] / x0_sq, raw[1], raw[2] * x0_sq, raw[3] / x0, raw[4] * x0, raw[5]])
}

pub fn dimensional_state(c: &GaussianCVector, scale: &Scale) -> [f64; 6] {
    let x0_sq = scale.x0_sq();
    let x0 = x0_sq.sqrt();
    [c.c1 * x0_sq, c.c2, c.c3 / x0_sq, c.c4 * x0, c.c5 / x0, c.c6]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig56() -> BathCoefficients {
        high_temp_coefficients(1.0, 2.0, 0.1).unwrap()
    }

    #[test]
    fn high_temp_examples() {
        let b = high_temp_coefficients(1.0, 100.0, 0.1).unwrap();
        assert_eq!((b.dpp, b.dpx), (100.0, 10.0));
        let b = fig56();
        assert_eq!(b.dpp, 2.0);
        assert!((b.dpx - 0.2).abs() < 1e-15);
        let b = high_temp_coefficients(1.0, 2.0, 1e-12).unwrap();
        assert!(b.dpx < 1e-11);
        assert!(high_temp_coefficients(0.0, 2.0, 0.1).is_err());
        assert!(high_temp_coefficients(1.0, -2.0, 0.1).is_err());
        assert!(high_temp_coefficients(1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn dekker_examples() {
        let b = fig56();
        assert!((dekker_min(&b).unwrap() - 0.145).abs() < 1e-15);
        let b0 = BathCoefficients::new(2.0, 3.0, 0.0).unwrap();
        assert_eq!(dekker_min(&b0).unwrap(), 4.0 / 12.0);
        assert!(dekker_min(&BathCoefficients::new(1.0, 0.0, 0.0).unwrap()).is_err());

        let m = b.with_dxx(dekker_min(&b).unwrap()).unwrap();
        let chk = dekker_check(&m);
        assert!(chk.satisfied && chk.slack.abs() < 1e-12);
        assert!(!dekker_check(&b.with_dxx(0.0).unwrap()).satisfied);
        let chk = dekker_check(&b.with_dxx(1.0).unwrap());
        assert!((chk.slack - 1.71).abs() < 1e-12);
    }

    #[test]
    fn steady_state_examples() {
        let m = fig56().with_dxx(0.145).unwrap();
        let s = steady_state(&m).unwrap();
        assert!((s.c1 - 2.58125).abs() < 1e-12);
        assert!((s.c2 + 0.0725).abs() < 1e-12);
        assert!((s.c3 - 0.5090625).abs() < 1e-12);
        assert_eq!((s.c4, s.c5, s.c6), (0.0, 0.0, 0.0));

        let g = 0.7;
        let m = ModelCoefficients::new(g, 0.0, 0.0, 2.0 * g).unwrap();
        let s = steady_state(&m).unwrap();
        assert!((s.covariance_det() - 0.25).abs() < 1e-14);

        let d = time_derivative(&fig56().with_dxx(0.3).unwrap(), &steady_state(&fig56().with_dxx(0.3).unwrap()).unwrap());
        assert!(d.to_array().iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn analytic_reaches_steady_state() {
        for g in [0.3, 2.5] {
            let m = ModelCoefficients::new(g, 2.0, 0.2, 0.5).unwrap();
            let s0 = GaussianCVector::new(3.0, 0.4, 1.0, 1.5, -0.7);
            // slowest second-moment rate is 2(g - sqrt(g^2 - 1)) when overdamped
            let slow = if g > 1.0 { g - (g * g - 1.0f64).sqrt() } else { g };
            let r = propagate_analytic(&s0, &m, &[0.0, 25.0 / slow]).unwrap();
            assert_eq!(r.states[0], s0);
            let st = steady_state(&m).unwrap();
            let fin = r.last().unwrap();
            for (a, b) in fin.to_array().iter().zip(st.to_array()) {
                assert!((a - b).abs() < 1e-8, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn displacement_decays_to_zero() {
        let m = ModelCoefficients::new(2.0, 1.0, 0.0, 1.0).unwrap();
        let s0 = GaussianCVector::new(1.0, 0.0, 1.0, 1.0, 0.0);
        let r = propagate_analytic(&s0, &m, &[1.0, 10.0, 60.0]).unwrap();
        let last = r.last().unwrap();
        assert!(last.c4.abs() < 1e-6 && last.c5.abs() < 1e-6);
        assert!(r.states[0].c4.abs() > last.c4.abs());
    }

    #[test]
    fn degenerate_gamma_uses_numeric_path() {
        let m = ModelCoefficients::new(1.0, 2.0, 0.2, 0.5).unwrap();
        let s0 = GaussianCVector::new(3.0, 0.4, 1.0, 1.5, -0.7);
        let r = propagate_analytic(&s0, &m, &[0.0, 1.0]).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.method, Method::Numeric);
        assert!(r.states.iter().all(|s| s.to_array().iter().all(|v| v.is_finite())));
    }

    #[test]
    fn near_degenerate_closed_form_stays_accurate() {
        let g = (1.0f64 + 2e-6).sqrt();
        let m = ModelCoefficients::new(g, 2.0, 0.2, 0.5).unwrap();
        let s0 = GaussianCVector::new(3.0, 0.4, 1.0, 1.5, -0.7);
        let a = propagate_analytic(&s0, &m, &[2.0]).unwrap();
        assert!(!a.degenerate);
        let n = propagate_numeric(&s0, &m, &[2.0], 1e-3).unwrap();
        for (x, y) in a.states[0].to_array().iter().zip(n.states[0].to_array()) {
            assert!((x - y).abs() < 1e-6, "{x} vs {y}");
        }
    }

    #[test]
    fn numeric_without_diffusion() {
        let m = ModelCoefficients::new(0.1, 0.0, 0.0, 0.0).unwrap();
        let s0 = GaussianCVector::new(10.0, 0.0, 3.0, 2.0, 1.0);
        let r = propagate_numeric(&s0, &m, &[0.0, 5.0, 10.0], 1e-3).unwrap();
        assert!(r.states.iter().all(|s| s.c6 == 0.0));
        let amp = |s: &GaussianCVector| s.c4 * s.c4 / 4.0 + s.c5 * s.c5;
        assert!(amp(&r.states[2]) < amp(&r.states[1]) && amp(&r.states[1]) < amp(&r.states[0]));
    }

    #[test]
    fn numeric_fixed_point() {
        let m = ModelCoefficients::new(0.8, 2.0, 0.3, 0.4).unwrap();
        let st = steady_state(&m).unwrap();
        let r = propagate_numeric(&st, &m, &[1.0, 5.0, 10.0], 1e-3).unwrap();
        for s in &r.states {
            for (a, b) in s.to_array().iter().zip(st.to_array()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn numeric_fails_when_coefficients_break_positivity() {
        // no diffusion at all: the state shrinks below the uncertainty bound
        let m = ModelCoefficients::new(1.5, 0.0, 0.0, 0.0).unwrap();
        let err = propagate_numeric(&GaussianCVector::GROUND, &m, &[5.0], 0.01).unwrap_err();
        assert!(matches!(err, Error::Propagation { .. }));
    }

    #[test]
    fn grid_is_checked() {
        let m = ModelCoefficients::new(0.5, 1.0, 0.0, 1.0).unwrap();
        let s = GaussianCVector::GROUND;
        assert!(propagate_analytic(&s, &m, &[1.0, 0.5]).is_err());
        assert!(propagate_analytic(&s, &m, &[-1.0]).is_err());
        assert!(propagate_numeric(&s, &m, &[1.0], 0.0).is_err());
    }

    #[test]
    fn nondimensional_examples() {
        // D_pp / (2 m w^2) = 10
        let (mass, omega) = (3.0, 0.5);
        let raw = RawCoefficients { gamma: 0.2, dpp: 10.0 * 2.0 * mass * omega * omega, dpx: 0.1, dxx: 0.4, mass, omega };
        let m = nondimensionalize(&raw).unwrap();
        assert!((m.dpp - 10.0).abs() < 1e-14);

        let raw = RawCoefficients { gamma: 1.0, dpp: 4.0, dpx: 0.0, dxx: 1.0, mass: 1.0, omega: 1.0 };
        let m = nondimensionalize(&raw).unwrap();
        assert_eq!(m.dpp, 2.0);
        assert_eq!(m.dxx, 2.0);

        let bad = RawCoefficients { mass: 0.0, ..raw };
        assert!(nondimensionalize(&bad).is_err());
        assert!(redimensionalize(&ModelCoefficients::new(1.0, 1.0, 1.0, 1.0).unwrap()).is_err());
    }
}
