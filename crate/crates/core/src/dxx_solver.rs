//! Selection of the position diffusion coefficient `D'xx` as the global
//! extremum of the entropy production over `[D'xx_min, inf)`.
//!
//! Every solver runs an exact one-dimensional search on the full entropy
//! production. The high-temperature rational approximation and the closed
//! forms it leads to are evaluated alongside as references, never as the
//! answer.

use crate::dynamics::{dekker_min, steady_state_unchecked, BathCoefficients, ModelCoefficients};
use crate::entropy::{asymptote_coefficients, entropy_production};
use crate::error::{Error, Result};
use crate::gaussian_state::GaussianCVector;
use crate::poly::Polynomial;
use crate::search::{search_half_line, tail_recedes, Goal, SearchOptions, SearchOutcome};

/// Relative imaginary part below which a polynomial root counts as real.
const ROOT_IMAG_TOLERANCE: f64 = 1e-9;

/// Allowed disagreement between the quartic route and the exact search for
/// initial states far from the steady state.
const QUARTIC_AGREEMENT: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    GlobalMax,
    GlobalMin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    DisplacedSqueezed,
    NearSteady,
    Unrelated,
}

impl ExtremumKind {
    pub fn label(self) -> &'static str {
        match self {
            ExtremumKind::GlobalMax => "global_max",
            ExtremumKind::GlobalMin => "global_min",
        }
    }

    fn goal(self) -> Goal {
        match self {
            ExtremumKind::GlobalMax => Goal::Maximize,
            ExtremumKind::GlobalMin => Goal::Minimize,
        }
    }
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::DisplacedSqueezed => "displaced_squeezed",
            Regime::NearSteady => "near_steady",
            Regime::Unrelated => "unrelated",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchDiagnostics {
    pub bracket: (f64, f64),
    pub iterations: usize,
    pub evaluations: usize,
    /// Final upper end of the log grid.
    pub cap: f64,
    /// `|d obj/dD| D / |obj|` at the selected point; zero when clamped.
    pub stationarity_residual: f64,
}

impl From<&SearchOutcome> for SearchDiagnostics {
    fn from(o: &SearchOutcome) -> Self {
        SearchDiagnostics {
            bracket: o.bracket,
            iterations: o.iterations,
            evaluations: o.evaluations,
            cap: o.cap,
            stationarity_residual: o.stationarity_residual,
        }
    }
}

/// Outcome of the high-temperature rational approximation.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialRoute {
    /// Degree of the stationarity polynomial after trimming.
    pub degree: usize,
    pub real_roots: Vec<f64>,
    /// Admissible root with the best approximate objective, or the Dekker
    /// minimum when no root is admissible.
    pub selected: f64,
    pub clamped: bool,
    /// No real root at all; only the exact search applies.
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremumResult {
    pub dxx_selected: f64,
    pub kind: ExtremumKind,
    /// The unconstrained extremum lies below the Dekker minimum.
    pub clamped: bool,
    pub regime: Regime,
    pub dekker_min: f64,
    /// Value of the searched objective at `dxx_selected`.
    pub objective: f64,
    pub diagnostics: SearchDiagnostics,
    pub polynomial: Option<PolynomialRoute>,
    /// Asymptotic closed-form value for comparison, when one applies.
    pub reference: Option<f64>,
    pub warnings: Vec<String>,
}

impl ExtremumResult {
    /// `(dxx_selected - reference) / reference`.
    pub fn reference_gap(&self) -> Option<f64> {
        self.reference.map(|r| (self.dxx_selected - r) / r)
    }
}

/// Initial states studied as functions of `D'xx`. All but `Fixed` follow
/// the steady state as `D'xx` changes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialConditionFamily {
    /// Stationary covariances with displacement `c4`, `c5`.
    DisplacedSqueezed { c4: f64, c5: f64 },
    /// Stationary covariances offset by `x`; `c4 = c5 = y`.
    NearSteady { x: f64, y: f64 },
    /// `c1 = c3 = x`, everything else zero.
    Unrelated { x: f64 },
    /// A state that does not depend on `D'xx`.
    Fixed(GaussianCVector),
}

impl InitialConditionFamily {
    pub fn state(&self, m: &ModelCoefficients) -> Result<GaussianCVector> {
        let st = steady_state_unchecked(m);
        let s = match *self {
            InitialConditionFamily::DisplacedSqueezed { c4, c5 } => GaussianCVector { c4, c5, ..st },
            InitialConditionFamily::NearSteady { x, y } => {
                GaussianCVector::new(st.c1 + x, st.c2 + x, st.c3 + x, y, y)
            }
            InitialConditionFamily::Unrelated { x } => GaussianCVector::new(x, 0.0, x, 0.0, 0.0),
            InitialConditionFamily::Fixed(s) => s,
        };
        s.ensure_valid()?;
        Ok(s)
    }

    /// The regime a family is expected to fall in.
    pub fn regime(&self) -> Regime {
        match self {
            InitialConditionFamily::DisplacedSqueezed { .. } => Regime::DisplacedSqueezed,
            InitialConditionFamily::NearSteady { .. } => Regime::NearSteady,
            InitialConditionFamily::Unrelated { .. } | InitialConditionFamily::Fixed(_) => Regime::Unrelated,
        }
    }
}

/// Roots `(D-, D+)` of `4 c1_st c3_st - c2_st^2 = 1/4`, where the steady
/// state becomes pure.
pub fn pure_steady_roots(bath: &BathCoefficients) -> (f64, f64) {
    let g = bath.gamma;
    let p = 4.0 * bath.dpp;
    let q = 8.0 * g * bath.dpx;
    // D^2 + b D + c = 0
    let b = (4.0 * g * g + 2.0) * p + q;
    let c = p * (p + q) - 4.0 * g * g;
    let disc = 16.0 * g * g * (g * g + 1.0) * p * p + 8.0 * g * g * p * q + q * q + 16.0 * g * g;
    let lower = -(b + disc.sqrt()) / 2.0;
    (lower, c / lower)
}

/// Diosi's medium-temperature value `gamma / (6 m k_B T)` in dimensionless
/// form, `gamma' / (3 T')`.
pub fn diosi_dxx(bath: &BathCoefficients) -> Option<f64> {
    bath.high_temp.map(|h| bath.gamma / (3.0 * h.temperature))
}

fn initial_cap(bath: &BathCoefficients, dmin: f64) -> f64 {
    1e3f64.max(10.0 * bath.dpp).max(10.0 * dmin)
}

fn search_options(bath: &BathCoefficients, dmin: f64) -> SearchOptions {
    SearchOptions { initial_cap: initial_cap(bath, dmin), ..SearchOptions::default() }
}

fn high_temp_warnings(bath: &BathCoefficients) -> Vec<String> {
    match bath.high_temp {
        Some(h) if !h.is_high_temperature() => {
            vec![format!("T'={} is outside the high-temperature regime", h.temperature)]
        }
        None => vec!["no temperature given; closed-form reference unavailable".into()],
        _ => Vec::new(),
    }
}

/// `sigma / w` for the family's initial state at the given `D'xx`.
pub fn sigma_for(family: &InitialConditionFamily, bath: &BathCoefficients, dxx: f64) -> Result<f64> {
    let m = bath.with_dxx(dxx)?;
    let s0 = family.state(&m)?;
    entropy_production(&s0, &m)
}

/// `f = D'xx arcoth(z) / z` with `z = 2 n_st + 1`. Maximizing `f` is the
/// same as maximizing the entropy production of a displaced stationary state
/// relative to its value at the Dekker minimum.
pub fn displaced_squeezed_objective(bath: &BathCoefficients, dxx: f64) -> Result<f64> {
    let st = steady_state_unchecked(&bath.with_dxx(dxx)?);
    let z = 2.0 * st.covariance_det().sqrt();
    if !(z > 1.0) {
        return Err(Error::DivergentEntropy(format!("steady state pure at D'xx={dxx}")));
    }
    Ok(dxx * 0.5 * (2.0 / (z - 1.0)).ln_1p() / z)
}

pub fn solve_displaced_squeezed(bath: &BathCoefficients) -> Result<ExtremumResult> {
    let dmin = dekker_min(bath)?;
    let out = search_half_line(
        |d| displaced_squeezed_objective(bath, d),
        dmin,
        Goal::Maximize,
        &search_options(bath, dmin),
        tail_recedes(Goal::Maximize),
    )?;
    let reference = bath
        .high_temp
        .map(|h| 4.0 * bath.gamma * h.temperature * (1.0 + 2.0 * bath.gamma * h.omega_ratio).sqrt());
    Ok(ExtremumResult {
        dxx_selected: out.x,
        kind: ExtremumKind::GlobalMax,
        clamped: out.at_lower_bound,
        regime: Regime::DisplacedSqueezed,
        dekker_min: dmin,
        objective: out.value,
        diagnostics: (&out).into(),
        polynomial: None,
        reference,
        warnings: high_temp_warnings(bath),
    })
}

/// Entropy production under `log((n+1)/n) ~ 2/(2n+1)`, as the ratio
/// `num / den` of polynomials in `u = D'xx / scale`.
struct RationalSigma {
    scale: f64,
    num: Polynomial,
    den: Polynomial,
}

impl RationalSigma {
    fn new(family: &InitialConditionFamily, bath: &BathCoefficients, scale: f64) -> Result<Self> {
        let g = bath.gamma;
        let lin = Polynomial::linear;
        let k = Polynomial::constant;
        let d = lin(0.0, scale);
        let st1 = lin((4.0 * bath.dpp + 8.0 * g * bath.dpx) / (4.0 * g), scale * (4.0 * g * g + 1.0) / (4.0 * g));
        let st2 = lin(0.0, -scale / 2.0);
        let st3 = lin(bath.dpp / (4.0 * g), scale / (16.0 * g));
        let c = match *family {
            InitialConditionFamily::NearSteady { x, y } => {
                [&st1 + &k(x), &st2 + &k(x), &st3 + &k(x), k(y), k(y)]
            }
            InitialConditionFamily::Unrelated { x } => [k(x), k(0.0), k(x), k(0.0), k(0.0)],
            InitialConditionFamily::Fixed(s) => [k(s.c1), k(s.c2), k(s.c3), k(s.c4), k(s.c5)],
            InitialConditionFamily::DisplacedSqueezed { c4, c5 } => [st1.clone(), st2.clone(), st3.clone(), k(c4), k(c5)],
        };
        // equations of motion, linear in D'xx
        let dc1 = &d + &c[1].scale(2.0);
        let dc2 = &(&k(2.0 * bath.dpx) + &c[2].scale(4.0)) - &(&c[0] + &c[1].scale(2.0 * g));
        let dc3 = &(&k(bath.dpp) - &c[1].scale(0.5)) - &c[2].scale(4.0 * g);
        let dc4 = c[4].scale(2.0);
        let dc5 = &c[3].scale(-0.5) - &c[4].scale(2.0 * g);

        let p0 = &(&c[0] * &c[2]).scale(4.0) - &(&c[1] * &c[1]);
        let pst = &(&st1 * &st3).scale(4.0) - &(&st2 * &st2);
        let ddet = &(&(&dc1 * &c[2]).scale(4.0) + &(&c[0] * &dc3).scale(4.0)) - &(&c[1] * &dc2).scale(2.0);
        let mut qdot = &(&(&dc1 * &st3).scale(2.0) + &(&dc3 * &st1).scale(2.0)) - &(&dc2 * &st2);
        qdot = &qdot + &(&(&st1 * &(&c[4] * &dc5)).scale(2.0) + &(&st3 * &(&c[3] * &dc4)).scale(2.0));
        qdot = &qdot - &(&st2 * &(&(&dc4 * &c[4]) + &(&c[3] * &dc5)));

        let num = &(&ddet * &pst) - &(&qdot * &p0).scale(2.0);
        let den = (&p0 * &pst).scale(2.0);
        Ok(RationalSigma { scale, num, den })
    }

    fn eval(&self, dxx: f64) -> f64 {
        let u = dxx / self.scale;
        self.num.eval(u) / self.den.eval(u)
    }

    /// Real zeros of `d sigma / dD` in `D'xx` units.
    fn stationary_points(&self) -> (usize, Vec<f64>) {
        let s = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let s = s.trimmed(1e-11);
        let roots = s.real_roots(ROOT_IMAG_TOLERANCE).into_iter().map(|u| u * self.scale).collect();
        (s.degree(), roots)
    }

    fn route(&self, kind: ExtremumKind, dmin: f64) -> PolynomialRoute {
        let (degree, real_roots) = self.stationary_points();
        let goal = kind.goal();
        let mut best: Option<(f64, f64)> = None;
        for &r in real_roots.iter().filter(|&&r| r >= dmin) {
            let v = self.eval(r);
            let better = match (best, goal) {
                (None, _) => true,
                (Some((_, b)), Goal::Maximize) => v > b,
                (Some((_, b)), Goal::Minimize) => v < b,
            };
            if better {
                best = Some((r, v));
            }
        }
        // an admissible root only counts if it beats the boundary
        let at_min = self.eval(dmin);
        let selected = match best {
            Some((r, v)) if matches!(goal, Goal::Maximize) && v >= at_min => Some(r),
            Some((r, v)) if matches!(goal, Goal::Minimize) && v <= at_min => Some(r),
            _ => None,
        };
        PolynomialRoute {
            degree,
            fallback: real_roots.is_empty(),
            real_roots,
            selected: selected.unwrap_or(dmin),
            clamped: selected.is_none(),
        }
    }
}

fn polynomial_scale(bath: &BathCoefficients, dmin: f64) -> f64 {
    bath.dpp.max(dmin).max(f64::MIN_POSITIVE)
}

fn exact_search(family: &InitialConditionFamily, bath: &BathCoefficients, kind: ExtremumKind, dmin: f64) -> Result<SearchOutcome> {
    let opts = search_options(bath, dmin);
    let f = |d: f64| sigma_for(family, bath, d);
    match kind {
        ExtremumKind::GlobalMax => search_half_line(f, dmin, Goal::Maximize, &opts, tail_recedes(Goal::Maximize)),
        ExtremumKind::GlobalMin => {
            let rising = tail_recedes(Goal::Minimize);
            let tail = |xs: &[f64], vs: &[f64]| {
                let n = xs.len();
                let cap = xs[n - 1];
                let line = bath
                    .with_dxx(cap)
                    .and_then(|m| family.state(&m).and_then(|s| asymptote_coefficients(&s, &m)));
                match line {
                    Ok(a) => rising(xs, vs) && (vs[n - 1] - (a.slope * cap + a.intercept)).abs() <= 0.01 * vs[n - 1].abs(),
                    Err(_) => false,
                }
            };
            search_half_line(f, dmin, Goal::Minimize, &opts, tail)
        }
    }
}

/// Initial state `c_st + x` on the covariances, `c4 = c5 = y`.
pub fn solve_near_steady(bath: &BathCoefficients, x: f64, y: f64) -> Result<ExtremumResult> {
    if !(x > 0.0 && x.is_finite() && y.is_finite()) {
        return Err(Error::InvalidArgument(format!("near-steady offsets x={x}, y={y}: need x > 0")));
    }
    let dmin = dekker_min(bath)?;
    let family = InitialConditionFamily::NearSteady { x, y };
    let mut warnings = high_temp_warnings(bath);
    let st = steady_state_unchecked(&bath.with_dxx(dmin)?);
    if x > 0.1 * st.c1.min(st.c3) || y.abs() > 0.1 * st.c1.min(st.c3) {
        warnings.push(format!("offsets x={x}, y={y} are not small against the steady state"));
    }
    let out = exact_search(&family, bath, ExtremumKind::GlobalMax, dmin)?;
    let route = RationalSigma::new(&family, bath, polynomial_scale(bath, dmin))?.route(ExtremumKind::GlobalMax, dmin);
    if route.fallback {
        warnings.push("stationarity polynomial has no real roots; exact search only".into());
    }
    Ok(ExtremumResult {
        dxx_selected: out.x,
        kind: ExtremumKind::GlobalMax,
        clamped: out.at_lower_bound,
        regime: Regime::NearSteady,
        dekker_min: dmin,
        objective: out.value,
        diagnostics: (&out).into(),
        polynomial: Some(route),
        reference: bath.high_temp.map(|h| bath.gamma * h.temperature / 4.0),
        warnings,
    })
}

/// Largest real root `y` of
/// `[y^2 + 8(2g^2+1) y + 16]^2 - 16 c^2 [(16g^2+1) y^2 + 32 y + 112] = 0`,
/// the stationarity condition in `D'xx = g T' y` with `w/Omega -> 0`.
pub fn unrelated_quartic_root(gamma: f64, c: f64) -> Option<f64> {
    let g2 = gamma * gamma;
    let f = Polynomial::new(vec![16.0, 8.0 * (2.0 * g2 + 1.0), 1.0]);
    let h = Polynomial::new(vec![112.0, 32.0, 16.0 * g2 + 1.0]);
    let q = &(&f * &f) - &h.scale(16.0 * c * c);
    q.real_roots(ROOT_IMAG_TOLERANCE).last().copied()
}

/// Taylor coefficients `[y0, y1, y2, y3]` of the largest quartic root in
/// powers of `c = x / T'`.
pub fn unrelated_root_expansion(gamma: f64) -> [f64; 4] {
    let g2 = gamma * gamma;
    let b = 2.0 * g2 + 1.0;
    // largest root of y^2 + 8 b y + 16
    let y0 = -16.0 / (4.0 * b + 4.0 * (b * b - 1.0).sqrt());
    // Taylor coefficients around y0 of F and G in the branch F = 4 c sqrt(G)
    let f = [0.0, 2.0 * y0 + 8.0 * b, 1.0, 0.0];
    let gg = [(16.0 * g2 + 1.0) * y0 * y0 + 32.0 * y0 + 112.0, 2.0 * (16.0 * g2 + 1.0) * y0 + 32.0, 16.0 * g2 + 1.0, 0.0];
    let mut s = [0.0; 4];
    s[0] = gg[0].sqrt();
    s[1] = gg[1] / (2.0 * s[0]);
    s[2] = (gg[2] - s[1] * s[1]) / (2.0 * s[0]);
    s[3] = (gg[3] - 2.0 * s[1] * s[2]) / (2.0 * s[0]);
    // h = F / (4 sqrt G) = h1 d + h2 d^2 + h3 d^3
    let mut h = [0.0; 4];
    for k in 0..4 {
        let acc: f64 = (0..k).map(|j| h[j] * s[k - j]).sum();
        h[k] = (f[k] / 4.0 - acc) / s[0];
    }
    // invert c = h(d)
    let y1 = 1.0 / h[1];
    let y2 = -h[2] / h[1].powi(3);
    let y3 = (2.0 * h[2] * h[2] - h[1] * h[3]) / h[1].powi(5);
    [y0, y1, y2, y3]
}

/// Initial state `c1 = c3 = x >> 1`; the entropy production grows without
/// bound in `D'xx`, so the selection is its global minimum.
pub fn solve_unrelated(bath: &BathCoefficients, x: f64) -> Result<ExtremumResult> {
    if !(x >= 10.0 && x.is_finite()) {
        return Err(Error::InvalidArgument(format!("unrelated family needs x >= 10, got {x}")));
    }
    let dmin = dekker_min(bath)?;
    let family = InitialConditionFamily::Unrelated { x };
    let out = exact_search(&family, bath, ExtremumKind::GlobalMin, dmin)?;
    let route = RationalSigma::new(&family, bath, polynomial_scale(bath, dmin))?.route(ExtremumKind::GlobalMin, dmin);
    let gap = (route.selected - out.x).abs() / out.x;
    if gap > QUARTIC_AGREEMENT {
        return Err(Error::Solver(format!(
            "quartic root {} and direct search {} differ by {:.2}%",
            route.selected,
            out.x,
            100.0 * gap
        )));
    }
    let reference = bath
        .high_temp
        .and_then(|h| unrelated_quartic_root(bath.gamma, x / h.temperature).map(|y| bath.gamma * h.temperature * y));
    Ok(ExtremumResult {
        dxx_selected: out.x,
        kind: ExtremumKind::GlobalMin,
        clamped: out.at_lower_bound,
        regime: Regime::Unrelated,
        dekker_min: dmin,
        objective: out.value,
        diagnostics: (&out).into(),
        polynomial: Some(route),
        reference,
        warnings: high_temp_warnings(bath),
    })
}

/// Whether `sigma` grows linearly at large `D'xx` for this family.
fn grows_without_bound(family: &InitialConditionFamily, bath: &BathCoefficients) -> Result<bool> {
    let dmin = dekker_min(bath)?;
    let probe = 1e4 * bath.dpp.max(dmin).max(1.0);
    let m = bath.with_dxx(probe)?;
    let s0 = family.state(&m)?;
    let a = asymptote_coefficients(&s0, &m)?.slope;
    let sigma = entropy_production(&s0, &m)?;
    Ok(a > 0.0 && sigma > 0.5 * a * probe)
}

/// Dispatches to the solver for the family after checking that the large
/// `D'xx` behaviour matches what the family implies.
pub fn classify_and_solve(family: &InitialConditionFamily, bath: &BathCoefficients) -> Result<ExtremumResult> {
    let dmin = dekker_min(bath)?;
    family.state(&bath.with_dxx(dmin)?)?;
    let unbounded = grows_without_bound(family, bath)?;
    let expected = match family {
        InitialConditionFamily::DisplacedSqueezed { .. } | InitialConditionFamily::NearSteady { .. } => Some(false),
        InitialConditionFamily::Unrelated { .. } => Some(true),
        InitialConditionFamily::Fixed(_) => None,
    };
    if let Some(e) = expected {
        if e != unbounded {
            return Err(Error::Solver(format!(
                "{} family but sigma is {} at large D'xx",
                family.regime().label(),
                if unbounded { "unbounded" } else { "bounded" }
            )));
        }
    }
    match *family {
        InitialConditionFamily::DisplacedSqueezed { .. } => solve_displaced_squeezed(bath),
        InitialConditionFamily::NearSteady { x, y } => solve_near_steady(bath, x, y),
        InitialConditionFamily::Unrelated { x } => solve_unrelated(bath, x),
        InitialConditionFamily::Fixed(_) => {
            let kind = if unbounded { ExtremumKind::GlobalMin } else { ExtremumKind::GlobalMax };
            let out = exact_search(family, bath, kind, dmin)?;
            Ok(ExtremumResult {
                dxx_selected: out.x,
                kind,
                clamped: out.at_lower_bound,
                regime: Regime::Unrelated,
                dekker_min: dmin,
                objective: out.value,
                diagnostics: (&out).into(),
                polynomial: None,
                reference: None,
                warnings: Vec::new(),
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPoint {
    pub dxx: f64,
    /// `None` where the steady or initial state is pure and `sigma` diverges.
    pub sigma: Option<f64>,
}

/// `sigma / w` on a grid of `D'xx`, recomputing the steady state each time.
pub fn scan_sigma(family: &InitialConditionFamily, bath: &BathCoefficients, grid: &[f64]) -> Result<Vec<ScanPoint>> {
    let dmin = dekker_min(bath)?;
    grid.iter()
        .map(|&dxx| {
            if !(dxx >= dmin * (1.0 - 1e-12) - 1e-12) {
                return Err(Error::InvalidArgument(format!("D'xx={dxx} below the Dekker minimum {dmin}")));
            }
            match sigma_for(family, bath, dxx) {
                Ok(s) => Ok(ScanPoint { dxx, sigma: Some(s) }),
                Err(Error::DivergentEntropy(_)) => Ok(ScanPoint { dxx, sigma: None }),
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// Locates the `gamma'` where the near-steady selection switches between
/// clamped and interior, by bisection between two `gamma'` values on
/// opposite sides.
pub fn near_steady_regime_boundary(temperature: f64, omega_ratio: f64, x: f64, gamma_lo: f64, gamma_hi: f64) -> Result<f64> {
    let clamped = |g: f64| -> Result<bool> {
        let bath = crate::dynamics::high_temp_coefficients(g, temperature, omega_ratio)?;
        Ok(solve_near_steady(&bath, x, 0.0)?.clamped)
    };
    let (mut lo, mut hi) = (gamma_lo, gamma_hi);
    let side = clamped(lo)?;
    if clamped(hi)? == side {
        return Err(Error::InvalidArgument(format!(
            "gamma' in [{lo}, {hi}] does not straddle a regime change"
        )));
    }
    while (hi - lo) > 1e-3 * lo {
        let mid = 0.5 * (lo + hi);
        if clamped(mid)? == side {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
