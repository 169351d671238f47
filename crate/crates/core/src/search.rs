//! One-dimensional global extremum search on `[lo, inf)`.
//!
//! A log-spaced grid up to a cap locates the basin; the cap doubles while the
//! best grid point sits on it or the caller's tail test rejects it. The
//! basin is then narrowed by golden-section search and finished by bisection
//! on the sign of a centred-difference derivative.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Goal {
    Maximize,
    Minimize,
}

impl Goal {
    fn better(self, a: f64, b: f64) -> bool {
        match self {
            Goal::Maximize => a > b,
            Goal::Minimize => a < b,
        }
    }

    /// `+1` when moving uphill (for the goal) means increasing `x`.
    fn sign(self) -> f64 {
        match self {
            Goal::Maximize => 1.0,
            Goal::Minimize => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub grid_points: usize,
    pub initial_cap: f64,
    pub max_doublings: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { grid_points: 2000, initial_cap: 1e3, max_doublings: 40 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub x: f64,
    pub value: f64,
    /// The extremum sits on the lower end of the admissible interval.
    pub at_lower_bound: bool,
    pub bracket: (f64, f64),
    pub iterations: usize,
    pub evaluations: usize,
    pub cap: f64,
    /// `|f'(x)| x / |f(x)|` from a centred difference; zero when clamped.
    pub stationarity_residual: f64,
}

pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

struct Counted<F> {
    f: F,
    calls: usize,
}

impl<F: FnMut(f64) -> Result<f64>> Counted<F> {
    fn call(&mut self, x: f64) -> Result<f64> {
        self.calls += 1;
        let v = (self.f)(x)?;
        if !v.is_finite() {
            return Err(Error::Solver(format!("objective not finite at {x:e}")));
        }
        Ok(v)
    }

    fn slope(&mut self, x: f64) -> Result<f64> {
        let h = 1e-6 * x.abs().max(f64::MIN_POSITIVE);
        Ok((self.call(x + h)? - self.call(x - h)?) / (2.0 * h))
    }
}

/// Global extremum of `f` on `[lo, inf)`.
///
/// `tail_ok(xs, values)` decides whether the sampled grid reaches far
/// enough; returning `false` doubles the cap.
pub fn search_half_line<F, T>(f: F, lo: f64, goal: Goal, opts: &SearchOptions, tail_ok: T) -> Result<SearchOutcome>
where
    F: FnMut(f64) -> Result<f64>,
    T: Fn(&[f64], &[f64]) -> bool,
{
    if !(lo > 0.0 && lo.is_finite()) {
        return Err(Error::InvalidArgument(format!("lower bound {lo} must be positive")));
    }
    let mut f = Counted { f, calls: 0 };
    let n = opts.grid_points.max(8);
    let mut cap = opts.initial_cap.max(10.0 * lo);
    let mut doublings = 0;
    let (xs, best) = loop {
        let xs = log_grid(lo, cap, n);
        let mut values = Vec::with_capacity(n);
        for &x in &xs {
            values.push(f.call(x)?);
        }
        let mut best = 0;
        for i in 1..n {
            if goal.better(values[i], values[best]) {
                best = i;
            }
        }
        if best < n - 1 && tail_ok(&xs, &values) {
            break (xs, best);
        }
        doublings += 1;
        if doublings > opts.max_doublings {
            return Err(Error::Solver(format!(
                "no interior extremum below cap {cap:e} after {} doublings",
                opts.max_doublings
            )));
        }
        cap *= 2.0;
    };

    let mut a = xs[best.saturating_sub(1)];
    let mut b = xs[best + 1];
    let s = goal.sign();
    let score = |v: f64| s * v;

    // golden section
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = score(f.call(x1)?);
    let mut f2 = score(f.call(x2)?);
    let mut iterations = 0;
    while (b - a) > 1e-7 * a && iterations < 200 {
        iterations += 1;
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = score(f.call(x1)?);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = score(f.call(x2)?);
        }
    }

    // boundary extremum: the objective gets worse moving right from lo
    if a <= lo * (1.0 + 1e-6) {
        let uphill_at_lo = s * f.slope(lo * (1.0 + 1e-5))? <= 0.0;
        if uphill_at_lo {
            let value = f.call(lo)?;
            return Ok(SearchOutcome {
                x: lo,
                value,
                at_lower_bound: true,
                bracket: (lo, b),
                iterations,
                evaluations: f.calls,
                cap,
                stationarity_residual: 0.0,
            });
        }
    }

    // bisection on the derivative sign inside [a, b]
    let (mut l, mut r) = (a, b);
    let sl = s * f.slope(l)?;
    let sr = s * f.slope(r)?;
    if sl > 0.0 && sr < 0.0 {
        for _ in 0..80 {
            if r - l <= 1e-14 * r {
                break;
            }
            iterations += 1;
            let mid = 0.5 * (l + r);
            if s * f.slope(mid)? > 0.0 {
                l = mid;
            } else {
                r = mid;
            }
        }
    }
    let x = 0.5 * (l + r);
    let value = f.call(x)?;
    let residual = (f.slope(x)? * x / value).abs();
    Ok(SearchOutcome {
        x,
        value,
        at_lower_bound: false,
        bracket: (a, b),
        iterations,
        evaluations: f.calls,
        cap,
        stationarity_residual: residual,
    })
}

/// Tail test for objectives that decay or saturate: the grid must end
/// moving away from the goal.
pub fn tail_recedes(goal: Goal) -> impl Fn(&[f64], &[f64]) -> bool {
    move |_, v| {
        let n = v.len();
        !goal.better(v[n - 1], v[n - 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_interior_maximum() {
        // x exp(-x/50) peaks at 50
        let f = |x: f64| Ok(x * (-x / 50.0).exp());
        let out = search_half_line(f, 0.1, Goal::Maximize, &SearchOptions::default(), tail_recedes(Goal::Maximize)).unwrap();
        assert!(!out.at_lower_bound);
        assert!((out.x - 50.0).abs() < 1e-8, "{}", out.x);
        assert!(out.stationarity_residual < 1e-8);
    }

    #[test]
    fn clamps_to_lower_bound() {
        let f = |x: f64| Ok(1.0 / x);
        let out = search_half_line(f, 2.0, Goal::Maximize, &SearchOptions::default(), tail_recedes(Goal::Maximize)).unwrap();
        assert!(out.at_lower_bound);
        assert_eq!(out.x, 2.0);
    }

    #[test]
    fn cap_doubles_for_far_minimum() {
        let f = |x: f64| Ok((x.ln() - 1e4f64.ln()).powi(2));
        let opts = SearchOptions { initial_cap: 100.0, ..Default::default() };
        let out = search_half_line(f, 1.0, Goal::Minimize, &opts, tail_recedes(Goal::Minimize)).unwrap();
        assert!(out.cap > 1e4);
        assert!((out.x / 1e4 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn monotone_objective_fails() {
        let f = |x: f64| Ok(x);
        let opts = SearchOptions { max_doublings: 5, ..Default::default() };
        let e = search_half_line(f, 1.0, Goal::Maximize, &opts, tail_recedes(Goal::Maximize)).unwrap_err();
        assert!(matches!(e, Error::Solver(_)));
    }
}
