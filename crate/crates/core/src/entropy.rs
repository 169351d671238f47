//! Relative entropy to the stationary state and entropy production.
//!
//! Both states are unitarily rotated thermal states, so the relative entropy
//! has a closed form in their occupations `n(t)`, `n_st` and the quadratic
//! coupling of the two covariance matrices. The entropy production is the
//! negative time derivative of that functional at `t = 0`. Logarithms are
//! natural throughout.

use crate::dynamics::{dekker_min, propagate_analytic, steady_state, ModelCoefficients};
use crate::error::{Error, Result};
use crate::gaussian_state::GaussianCVector;

/// Occupations at or below this count as pure, where the entropies diverge.
pub const MIXED_CUTOFF: f64 = 1e-8;

fn mixed_nbar(state: &GaussianCVector, which: &str) -> Result<f64> {
    let n = state.nbar()?;
    if n <= MIXED_CUTOFF {
        return Err(Error::DivergentEntropy(format!("{which} state is pure (nbar={n:e})")));
    }
    Ok(n)
}

/// `log((n + 1) / n)`.
fn log_ratio(n: f64) -> f64 {
    (1.0 / n).ln_1p()
}

/// `-(n + 1) log(n + 1) + n log n`, the negated von Neumann entropy; zero
/// for a pure state.
fn neg_entropy(n: f64) -> f64 {
    if n <= 0.0 {
        return 0.0;
    }
    -n.ln_1p() - n * log_ratio(n)
}

/// `S(rho(t) | rho_st)` in nats.
///
/// Evaluated as `[f(n) - f(n_st)] + K (Q - Q_st)`, with
/// `K = 2 log((n_st+1)/n_st) / (2 n_st + 1)`; each bracket vanishes
/// separately at the stationary state so small values keep their precision.
/// A pure `state` is allowed (its entropy is zero); a pure stationary state
/// is not.
pub fn relative_entropy(state: &GaussianCVector, m: &ModelCoefficients) -> Result<f64> {
    let st = steady_state(m)?;
    let n = state.nbar()?.max(0.0);
    let nst = mixed_nbar(&st, "stationary")?;
    let k = 2.0 * log_ratio(nst) / (2.0 * nst + 1.0);
    let dq = 2.0 * (state.c1 - st.c1) * st.c3 + 2.0 * (state.c3 - st.c3) * st.c1
        - (state.c2 - st.c2) * st.c2
        + st.c1 * state.c5 * state.c5
        + st.c3 * state.c4 * state.c4
        - state.c4 * state.c5 * st.c2;
    Ok(neg_entropy(n) - neg_entropy(nst) + k * dq)
}

/// `(tau, S)` along the closed-form trajectory.
pub fn relative_entropy_trajectory(
    state0: &GaussianCVector,
    m: &ModelCoefficients,
    taus: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let run = propagate_analytic(state0, m, taus)?;
    run.times
        .iter()
        .zip(&run.states)
        .map(|(&t, s)| relative_entropy(s, m).map(|v| (t, v)))
        .collect()
}

/// Entropy production `sigma / w` of the initial state `state0`.
pub fn entropy_production(state0: &GaussianCVector, m: &ModelCoefficients) -> Result<f64> {
    let st = steady_state(m)?;
    let n0 = mixed_nbar(state0, "initial")?;
    let nst = mixed_nbar(&st, "stationary")?;
    let (g, dpp, dpx, dxx) = (m.gamma, m.dpp, m.dpx, m.dxx);
    let GaussianCVector { c1, c2, c3, c4, c5, .. } = *state0;

    // (2 n0 + 1)^2 = 4 (4 c1 c3 - c2^2)
    let width0 = 2.0 * n0 + 1.0;
    let occupation_rate =
        (4.0 * dpp * c1 - 4.0 * dpx * c2 + 4.0 * dxx * c3 - g * 4.0 * state0.covariance_det()) / width0;

    let coupling = 4.0 * dpp * dpp + dxx * dxx / 4.0 + 2.0 * dpp * dxx * (2.0 * g * g + 1.0)
        - 8.0 * g * dpp * (2.0 * c3 + c5 * c5)
        + 2.0 * g * dpx * (4.0 * dpp + dxx - 2.0 * c2 - 2.0 * c4 * c5 - 16.0 * g * c3 - 8.0 * g * c5 * c5)
        - g * dxx
            * (c1 + 4.0 * g * c2 + 16.0 * g * g * c3 + (c4 + 4.0 * g * c5).powi(2) / 2.0);

    Ok(occupation_rate * log_ratio(n0) - log_ratio(nst) * coupling / (g * (2.0 * nst + 1.0)))
}

/// Entropy production of a displaced and squeezed stationary state, i.e.
/// `c1..c3` at their stationary values and arbitrary `c4`, `c5`.
pub fn entropy_production_displaced_squeezed(c4: f64, c5: f64, m: &ModelCoefficients) -> Result<f64> {
    let st = steady_state(m)?;
    let nst = mixed_nbar(&st, "stationary")?;
    let u = c4 + 4.0 * m.gamma * c5;
    let quad = 16.0 * m.dpp * c5 * c5 + 8.0 * m.dpx * c5 * u + m.dxx * u * u;
    Ok(quad * log_ratio(nst) / (4.0 * nst + 2.0))
}

/// `sigma(D'xx) / sigma(D'xx_min)` for a displaced and squeezed stationary
/// initial state.
pub fn sigma_renormalized(c4: f64, c5: f64, m: &ModelCoefficients) -> Result<f64> {
    if c4 == 0.0 && c5 == 0.0 {
        return Err(Error::InvalidArgument(
            "sigma_R undefined without displacement (0/0)".into(),
        ));
    }
    let floor = m.with_dxx(dekker_min(&m.bath())?)?;
    let reference = entropy_production_displaced_squeezed(c4, c5, &floor)?;
    if reference == 0.0 {
        return Err(Error::InvalidArgument("sigma vanishes at the Dekker minimum".into()));
    }
    Ok(entropy_production_displaced_squeezed(c4, c5, m)? / reference)
}

/// Large-`D'xx` line `sigma / w ~ slope D'xx + intercept` for an initial
/// state that does not depend on `D'xx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Asymptote {
    pub slope: f64,
    pub intercept: f64,
}

pub fn asymptote_coefficients(state0: &GaussianCVector, m: &ModelCoefficients) -> Result<Asymptote> {
    let n0 = mixed_nbar(state0, "initial")?;
    let width0 = 2.0 * n0 + 1.0;
    let l0 = log_ratio(n0);
    let slope = 4.0 * state0.c3 * l0 / width0;
    let intercept = (4.0 * m.dpp * state0.c1 - 4.0 * m.dpx * state0.c2 - m.gamma * width0 * width0) / width0 * l0
        - 2.0 * m.gamma;
    Ok(Asymptote { slope, intercept })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyReport {
    pub s_rel: f64,
    pub sigma: f64,
    /// `sigma(D'xx) / sigma(D'xx_min)` at fixed initial state, when asked for.
    pub sigma_renormalized: Option<f64>,
    pub nbar_t: f64,
    pub nbar_st: f64,
    pub asymptote: Asymptote,
}

pub fn entropy_report(state: &GaussianCVector, m: &ModelCoefficients, renormalize: bool) -> Result<EntropyReport> {
    let sigma = entropy_production(state, m)?;
    let sigma_renormalized = if renormalize {
        let floor = m.with_dxx(dekker_min(&m.bath())?)?;
        let reference = entropy_production(state, &floor)?;
        if reference == 0.0 {
            return Err(Error::InvalidArgument("sigma vanishes at the Dekker minimum".into()));
        }
        Some(sigma / reference)
    } else {
        None
    };
    Ok(EntropyReport {
        s_rel: relative_entropy(state, m)?,
        sigma,
        sigma_renormalized,
        nbar_t: state.nbar()?,
        nbar_st: steady_state(m)?.nbar()?,
        asymptote: asymptote_coefficients(state, m)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{high_temp_coefficients, time_derivative, BathCoefficients};
    use crate::gaussian_state::thermal_state;

    /// Relative entropy exactly as the closed form is usually displayed.
    fn relative_entropy_displayed(s: &GaussianCVector, m: &ModelCoefficients) -> f64 {
        let st = steady_state(m).unwrap();
        let n = s.nbar().unwrap();
        let nst = st.nbar().unwrap();
        -(n + 1.0) * (n + 1.0).ln() + n * n.ln()
            + ((nst + 1.0) * nst).ln() / 2.0
            + 2.0 * ((nst + 1.0) / nst).ln() / (2.0 * nst + 1.0)
                * (2.0 * s.c1 * st.c3 + 2.0 * s.c3 * st.c1 - s.c2 * st.c2 + st.c1 * s.c5 * s.c5
                    + st.c3 * s.c4 * s.c4
                    - s.c4 * s.c5 * st.c2)
    }

    /// Chain rule on S(n(t), Q(t)) with the equations of motion.
    fn entropy_production_chain_rule(s: &GaussianCVector, m: &ModelCoefficients) -> f64 {
        let st = steady_state(m).unwrap();
        let d = time_derivative(m, s);
        let n = s.nbar().unwrap();
        let nst = st.nbar().unwrap();
        let ndot = (4.0 * d.c1 * s.c3 + 4.0 * s.c1 * d.c3 - 2.0 * s.c2 * d.c2) / (2.0 * n + 1.0);
        let qdot = 2.0 * d.c1 * st.c3 + 2.0 * d.c3 * st.c1 - d.c2 * st.c2
            + st.c1 * 2.0 * s.c5 * d.c5
            + st.c3 * 2.0 * s.c4 * d.c4
            - st.c2 * (d.c4 * s.c5 + s.c4 * d.c5);
        ndot * log_ratio(n) - 2.0 * log_ratio(nst) / (2.0 * nst + 1.0) * qdot
    }

    fn fig56(dxx: f64) -> ModelCoefficients {
        high_temp_coefficients(1.0, 2.0, 0.1).unwrap().with_dxx(dxx).unwrap()
    }

    #[test]
    fn stationary_state_has_zero_entropy() {
        let m = fig56(0.3);
        let st = steady_state(&m).unwrap();
        assert!(relative_entropy(&st, &m).unwrap().abs() < 1e-12);
        assert!(entropy_production(&st, &m).unwrap().abs() < 1e-10);
    }

    #[test]
    fn matches_displayed_form() {
        let m = fig56(0.7);
        for s in [
            GaussianCVector::new(3.0, 0.4, 1.0, 1.5, -0.7),
            thermal_state(2.0).unwrap(),
            GaussianCVector::new(1.0, 1.0, 1.0, 2.0, 2.0),
        ] {
            let a = relative_entropy(&s, &m).unwrap();
            let b = relative_entropy_displayed(&s, &m);
            assert!((a - b).abs() < 1e-12 * b.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn closed_form_production_matches_chain_rule() {
        let m = fig56(0.9);
        for s in [
            GaussianCVector::new(3.0, 0.4, 1.0, 1.5, -0.7),
            thermal_state(2.0).unwrap(),
            GaussianCVector::new(1.0, 1.0, 1.0, 2.0, 2.0),
        ] {
            let a = entropy_production(&s, &m).unwrap();
            let b = entropy_production_chain_rule(&s, &m);
            assert!((a - b).abs() < 1e-11 * b.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn pure_states_are_rejected() {
        let m = fig56(0.3);
        let e = entropy_production(&GaussianCVector::GROUND, &m).unwrap_err();
        assert!(matches!(e, Error::DivergentEntropy(_)));
        let st_pure = ModelCoefficients::new(0.5, 0.0, 0.0, 1.0).unwrap();
        let e = relative_entropy(&thermal_state(1.0).unwrap(), &st_pure).unwrap_err();
        assert!(matches!(e, Error::DivergentEntropy(_)));
        let g = 0.5;
        let pure_st = ModelCoefficients::new(g, 0.0, 0.0, 2.0 * g).unwrap();
        let e = entropy_production(&thermal_state(1.0).unwrap(), &pure_st).unwrap_err();
        assert!(matches!(e, Error::DivergentEntropy(_)));
    }

    #[test]
    fn pure_evolving_state_has_finite_relative_entropy() {
        let m = fig56(0.3);
        let pure = relative_entropy(&GaussianCVector::GROUND, &m).unwrap();
        let g = GaussianCVector::GROUND;
        let nearly = GaussianCVector { c1: g.c1 * (1.0 + 1e-9), c3: g.c3 * (1.0 + 1e-9), ..g };
        let mixed = relative_entropy(&nearly, &m).unwrap();
        assert!(pure > 0.0 && pure.is_finite());
        assert!((pure - mixed).abs() < 1e-6 * pure);
    }

    #[test]
    fn displaced_squeezed_specialisation() {
        let b = high_temp_coefficients(1.0, 2.0, 0.1).unwrap();
        for dxx in [0.145, 0.5, 3.0, 40.0] {
            let m = b.with_dxx(dxx).unwrap();
            let mut s = steady_state(&m).unwrap();
            s.c4 = 2.0;
            s.c5 = 2.0;
            let general = entropy_production(&s, &m).unwrap();
            let special = entropy_production_displaced_squeezed(2.0, 2.0, &m).unwrap();
            assert!(special > 0.0);
            assert!((general - special).abs() < 1e-10 * special.abs().max(1.0), "{general} vs {special}");
        }
        assert_eq!(entropy_production_displaced_squeezed(0.0, 0.0, &b.with_dxx(0.3).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn displaced_squeezed_numerator_is_linear_in_dxx() {
        let b = high_temp_coefficients(1.0, 2.0, 0.1).unwrap();
        let numerator = |d: f64| {
            let m = b.with_dxx(d).unwrap();
            let nst = steady_state(&m).unwrap().nbar().unwrap();
            entropy_production_displaced_squeezed(2.0, 2.0, &m).unwrap() * (4.0 * nst + 2.0) / log_ratio(nst)
        };
        let (x0, x1, x2) = (0.2, 1.7, 5.3);
        let (y0, y1, y2) = (numerator(x0), numerator(x1), numerator(x2));
        let slope01 = (y1 - y0) / (x1 - x0);
        let slope12 = (y2 - y1) / (x2 - x1);
        assert!((slope01 - slope12).abs() < 1e-10 * slope01.abs());
    }

    #[test]
    fn renormalized_examples() {
        let b = high_temp_coefficients(1.0, 2.0, 0.1).unwrap();
        let dmin = dekker_min(&b).unwrap();
        let at_min = sigma_renormalized(1.0, 1.0, &b.with_dxx(dmin).unwrap()).unwrap();
        assert!((at_min - 1.0).abs() < 1e-14);
        assert!(sigma_renormalized(0.0, 0.0, &b.with_dxx(1.0).unwrap()).is_err());

        for d in [0.3, 1.0, 5.0, 30.0] {
            let m = b.with_dxx(d).unwrap();
            let r = |c4, c5| sigma_renormalized(c4, c5, &m).unwrap();
            // smaller positive c5 gives larger sigma_R
            assert!(r(1.0, 0.5) > r(1.0, 1.0));
            assert!(r(1.0, 0.3) > r(1.0, 0.4) && r(1.0, 0.4) > r(1.0, 0.5));
            for (c4, c5) in [(0.5, 1.0), (1.0, 1.0), (1.0, 0.5)] {
                assert!(r(c4, c5) / r(c4, 0.0) <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn asymptote_examples() {
        let b = high_temp_coefficients(1.0, 100.0, 0.1).unwrap();
        // stationary-tied initial data: the slope vanishes
        let slope_at = |d: f64| {
            let m = b.with_dxx(d).unwrap();
            asymptote_coefficients(&steady_state(&m).unwrap(), &m).unwrap().slope
        };
        assert!(slope_at(1e6) < slope_at(1e4) && slope_at(1e6) < 1e-3);

        // unrelated initial state: positive slope and sigma follows the line
        let s = GaussianCVector::new(50.0, 0.0, 50.0, 0.0, 0.0);
        let m = b.with_dxx(1e7).unwrap();
        let a = asymptote_coefficients(&s, &m).unwrap();
        assert!(a.slope > 0.0);
        let sigma = entropy_production(&s, &m).unwrap();
        let line = a.slope * 1e7 + a.intercept;
        assert!((sigma - line).abs() < 1e-3 * line.abs(), "{sigma} vs {line}");

        // near-stationary initial state: sigma -> 0
        let near = |d: f64| {
            let m = b.with_dxx(d).unwrap();
            let st = steady_state(&m).unwrap();
            let s = GaussianCVector::new(st.c1 + 0.1, st.c2 + 0.1, st.c3 + 0.1, 0.0, 0.0);
            entropy_production(&s, &m).unwrap()
        };
        assert!(near(1e6) < near(1e4) && near(1e6) < 1e-8);
    }

    #[test]
    fn report_collects_fields() {
        let b = BathCoefficients::new(1.0, 2.0, 0.2).unwrap();
        let m = b.with_dxx(0.5).unwrap();
        let s = GaussianCVector::new(1.0, 0.0, 1.0, 0.5, 0.5);
        let r = entropy_report(&s, &m, true).unwrap();
        assert!(r.s_rel > 0.0 && r.sigma > 0.0);
        assert!((r.nbar_t - 1.5).abs() < 1e-14);
        assert!(r.sigma_renormalized.unwrap() > 0.0);
        assert!(entropy_report(&s, &m, false).unwrap().sigma_renormalized.is_none());
    }
}
