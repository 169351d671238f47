//! Curve data and plot scripts for the ten reference figures.
//!
//! Every default below is the parameter set printed in the caption of the
//! corresponding figure; all of them can be overridden with `--set`.

use num_complex::Complex64;
use rayon::prelude::*;

use qbm_core::dxx_solver::{scan_sigma, InitialConditionFamily};
use qbm_core::entropy::{relative_entropy_trajectory, sigma_renormalized};
use qbm_core::{
    coherent_state, dekker_min, high_temp_coefficients, thermal_state, BathCoefficients, GaussianCVector,
};

use crate::config::{linspace, logspace, Params};
use crate::error::{config_err, CliResult};
use crate::output::{fmt_f64, OutDir, Table};

enum Job {
    /// `S(tau)` from a fixed initial state with `D'xx` at the Dekker minimum.
    Trajectory { bath: BathCoefficients, state: GaussianCVector, taus: Vec<f64> },
    /// `sigma(D'xx)` for an initial-state family.
    Scan { bath: BathCoefficients, family: InitialConditionFamily, points: usize, hi: f64, log: bool },
    /// `sigma(D'xx) / sigma(D'xx_min)` for a displaced stationary state.
    Renormalized { bath: BathCoefficients, c4: f64, c5: f64, points: usize, hi: f64 },
}

struct Curve {
    slug: String,
    title: String,
    job: Job,
}

pub struct Figure {
    number: u8,
    caption: String,
    xlabel: &'static str,
    ylabel: &'static str,
    logx: bool,
    logy: bool,
    curves: Vec<Curve>,
}

fn dxx_grid(bath: &BathCoefficients, points: usize, hi: f64, log: bool) -> CliResult<Vec<f64>> {
    let lo = dekker_min(bath)?;
    if !(hi > lo) || points < 2 {
        return Err(config_err(format!("need dxx_max > {lo} and dxx_points >= 2")));
    }
    Ok(if log { logspace(lo, hi, points) } else { linspace(lo, hi, points) })
}

impl Job {
    fn run(&self) -> CliResult<Table> {
        match self {
            Job::Trajectory { bath, state, taus } => {
                let m = bath.with_dxx(dekker_min(bath)?)?;
                let mut t = Table::new(&["tau", "s_rel"]);
                for (tau, s) in relative_entropy_trajectory(state, &m, taus)? {
                    t.push(&[tau, s]);
                }
                Ok(t)
            }
            Job::Scan { bath, family, points, hi, log } => {
                let grid = dxx_grid(bath, *points, *hi, *log)?;
                let mut t = Table::new(&["dxx", "sigma"]);
                for p in scan_sigma(family, bath, &grid)? {
                    t.push_cells(vec![fmt_f64(p.dxx), p.sigma.map_or_else(|| "inf".to_string(), fmt_f64)]);
                }
                Ok(t)
            }
            Job::Renormalized { bath, c4, c5, points, hi } => {
                let mut t = Table::new(&["dxx", "sigma_r"]);
                for dxx in dxx_grid(bath, *points, *hi, false)? {
                    t.push(&[dxx, sigma_renormalized(*c4, *c5, &bath.with_dxx(dxx)?)?]);
                }
                Ok(t)
            }
        }
    }
}

fn tau_grid(p: &Params, end: f64, points: usize) -> CliResult<Vec<f64>> {
    let end = p.f64_or("tau_end", end)?;
    let n = p.usize_or("tau_points", points)?;
    if !(end > 0.0) || n < 2 {
        return Err(config_err("need tau_end > 0 and tau_points >= 2"));
    }
    Ok(linspace(0.0, end, n))
}

/// Relative entropy in time for three damping rates.
fn relaxation(number: u8, p: &Params) -> CliResult<Figure> {
    // caption of figures 1 and 2: D_pp/(2 m w^2) = 10, w/Omega = 0.1,
    // gamma/w in {0.1, 1, 10}, D_xx at its Dekker minimum
    let gammas = p.list_or("gammas", &[0.1, 1.0, 10.0])?;
    let dpp = p.f64_or("dpp", 10.0)?;
    let ratio = p.f64_or("omega_ratio", 0.1)?;
    let taus = tau_grid(p, 50.0, 1001)?;
    let (state, what) = if number == 1 {
        // figure 1 caption: coherent state alpha = 2 + 2i
        let alpha = Complex64::new(p.f64_or("alpha_re", 2.0)?, p.f64_or("alpha_im", 2.0)?);
        (coherent_state(alpha), format!("coherent state alpha={}", alpha))
    } else {
        // figure 2 caption: thermal state with nbar = 2
        let n = p.f64_or("nbar", 2.0)?;
        (thermal_state(n)?, format!("thermal state nbar={n}"))
    };
    let curves = gammas
        .iter()
        .map(|&g| {
            Ok(Curve {
                slug: format!("gamma_{}", fmt_f64(g)),
                title: format!("gamma'={g}"),
                job: Job::Trajectory { bath: BathCoefficients::new(g, dpp, dpp * ratio)?, state, taus: taus.clone() },
            })
        })
        .collect::<CliResult<_>>()?;
    Ok(Figure {
        number,
        caption: format!("relative entropy S(tau), {what}, D'pp={dpp}, w/Omega={ratio}, D'xx=Dekker minimum"),
        xlabel: "tau",
        ylabel: "S",
        logx: false,
        logy: false,
        curves,
    })
}

/// Entropy production against `D'xx` for three damping rates with
/// `D'pp`, `D'px` proportional to `gamma'`.
fn damping_scan(number: u8, p: &Params) -> CliResult<Figure> {
    // caption of figures 3 and 4: c4(0) = c5(0) = 2, D'pp/gamma' = 2,
    // D'px/gamma' = 0.2, gamma' in {0.8, 1, 1.2}
    let gammas = p.list_or("gammas", &[0.8, 1.0, 1.2])?;
    let dpp_per = p.f64_or("dpp_over_gamma", 2.0)?;
    let dpx_per = p.f64_or("dpx_over_gamma", 0.2)?;
    let c4 = p.f64_or("c4", 2.0)?;
    let c5 = p.f64_or("c5", 2.0)?;
    let points = p.usize_or("dxx_points", 400)?;
    let hi = p.f64_or("dxx_max", 10.0)?;
    let (what, family) = if number == 3 {
        // figure 3 caption: c1(0) = c2(0) = c3(0) = 1
        let c = [p.f64_or("c1", 1.0)?, p.f64_or("c2", 1.0)?, p.f64_or("c3", 1.0)?];
        let s = GaussianCVector::new(c[0], c[1], c[2], c4, c5);
        ("fixed initial state", InitialConditionFamily::Fixed(s))
    } else {
        // figure 4 caption: displaced and squeezed steady state
        ("displaced squeezed stationary state", InitialConditionFamily::DisplacedSqueezed { c4, c5 })
    };
    let curves = gammas
        .iter()
        .map(|&g| {
            Ok(Curve {
                slug: format!("gamma_{}", fmt_f64(g)),
                title: format!("gamma'={g}"),
                job: Job::Scan {
                    bath: BathCoefficients::new(g, dpp_per * g, dpx_per * g)?,
                    family,
                    points,
                    hi,
                    log: false,
                },
            })
        })
        .collect::<CliResult<_>>()?;
    Ok(Figure {
        number,
        caption: format!(
            "sigma vs D'xx, {what}, c4={c4}, c5={c5}, D'pp/gamma'={dpp_per}, D'px/gamma'={dpx_per}"
        ),
        xlabel: "D'xx",
        ylabel: "sigma/w",
        logx: false,
        logy: false,
        curves,
    })
}

/// Renormalized entropy production for three displacements.
fn renormalized(number: u8, p: &Params) -> CliResult<Figure> {
    // caption of figures 5 and 6: gamma' = 1, D'pp = 2, D'px = 0.2
    let g = p.f64_or("gamma", 1.0)?;
    let dpp = p.f64_or("dpp", 2.0)?;
    let dpx = p.f64_or("dpx", 0.2)?;
    let (c4s, c5s): (&[f64], &[f64]) = if number == 5 {
        // figure 5 caption: (c4, c5) = (0.5, 1), (1, 1), (1, 0.5)
        (&[0.5, 1.0, 1.0], &[1.0, 1.0, 0.5])
    } else {
        // figure 6 caption: (c4, c5) = (1, 0.5), (1, 0.4), (1, 0.3)
        (&[1.0, 1.0, 1.0], &[0.5, 0.4, 0.3])
    };
    let c4s = p.list_or("c4s", c4s)?;
    let c5s = p.list_or("c5s", c5s)?;
    if c4s.len() != c5s.len() {
        return Err(config_err("c4s and c5s must have the same length"));
    }
    let points = p.usize_or("dxx_points", 400)?;
    let hi = p.f64_or("dxx_max", 10.0)?;
    let bath = BathCoefficients::new(g, dpp, dpx)?;
    let curves = c4s
        .iter()
        .zip(&c5s)
        .map(|(&c4, &c5)| Curve {
            slug: format!("c4_{}_c5_{}", fmt_f64(c4), fmt_f64(c5)),
            title: format!("c4={c4}, c5={c5}"),
            job: Job::Renormalized { bath, c4, c5, points, hi },
        })
        .collect();
    Ok(Figure {
        number,
        caption: format!("renormalized sigma vs D'xx, gamma'={g}, D'pp={dpp}, D'px={dpx}"),
        xlabel: "D'xx",
        ylabel: "sigma_R",
        logx: false,
        logy: false,
        curves,
    })
}

/// Near-steady initial state at high temperature, one damping rate.
fn near_steady(number: u8, p: &Params) -> CliResult<Figure> {
    // caption of figures 7 and 8: w/Omega = 0.1, T' = 100, x = 0.1;
    // gamma' = 1 (figure 7) and gamma' = 4 (figure 8)
    let g = p.f64_or("gamma", if number == 7 { 1.0 } else { 4.0 })?;
    let t = p.f64_or("temperature", 100.0)?;
    let r = p.f64_or("omega_ratio", 0.1)?;
    let x = p.f64_or("x", 0.1)?;
    let y = p.f64_or("y", 0.0)?;
    let points = p.usize_or("dxx_points", 400)?;
    let hi = p.f64_or("dxx_max", 1e4)?;
    let curves = vec![Curve {
        slug: format!("gamma_{}", fmt_f64(g)),
        title: format!("gamma'={g}"),
        job: Job::Scan {
            bath: high_temp_coefficients(g, t, r)?,
            family: InitialConditionFamily::NearSteady { x, y },
            points,
            hi,
            log: true,
        },
    }];
    Ok(Figure {
        number,
        caption: format!("sigma vs D'xx, near-steady state x={x}, y={y}, T'={t}, w/Omega={r}, gamma'={g}"),
        xlabel: "D'xx",
        ylabel: "sigma/w",
        logx: true,
        logy: false,
        curves,
    })
}

/// Initial state far from the steady state, varying damping (figure 9)
/// or temperature (figure 10).
fn unrelated(number: u8, p: &Params) -> CliResult<Figure> {
    // caption of figures 9 and 10: w/Omega = 0.1, x = 50
    let r = p.f64_or("omega_ratio", 0.1)?;
    let x = p.f64_or("x", 50.0)?;
    let points = p.usize_or("dxx_points", 400)?;
    let hi = p.f64_or("dxx_max", 60.0)?;
    let family = InitialConditionFamily::Unrelated { x };
    let scan = |bath| Job::Scan { bath, family, points, hi, log: false };
    let (curves, what) = if number == 9 {
        // figure 9 caption: T' = 100, gamma' in {1, 2, 3}
        let t = p.f64_or("temperature", 100.0)?;
        let curves = p
            .list_or("gammas", &[1.0, 2.0, 3.0])?
            .into_iter()
            .map(|g| {
                Ok(Curve {
                    slug: format!("gamma_{}", fmt_f64(g)),
                    title: format!("gamma'={g}"),
                    job: scan(high_temp_coefficients(g, t, r)?),
                })
            })
            .collect::<CliResult<Vec<_>>>()?;
        (curves, format!("T'={t}"))
    } else {
        // figure 10 caption: gamma' = 1, T' in {100, 125, 150}
        let g = p.f64_or("gamma", 1.0)?;
        let curves = p
            .list_or("temperatures", &[100.0, 125.0, 150.0])?
            .into_iter()
            .map(|t| {
                Ok(Curve {
                    slug: format!("T_{}", fmt_f64(t)),
                    title: format!("T'={t}"),
                    job: scan(high_temp_coefficients(g, t, r)?),
                })
            })
            .collect::<CliResult<Vec<_>>>()?;
        (curves, format!("gamma'={g}"))
    };
    Ok(Figure {
        number,
        caption: format!("sigma vs D'xx, unrelated state x={x}, w/Omega={r}, {what}"),
        xlabel: "D'xx",
        ylabel: "sigma/w",
        logx: false,
        logy: false,
        curves,
    })
}

pub fn build(number: u8, p: &Params) -> CliResult<Figure> {
    match number {
        1 | 2 => relaxation(number, p),
        3 | 4 => damping_scan(number, p),
        5 | 6 => renormalized(number, p),
        7 | 8 => near_steady(number, p),
        9 | 10 => unrelated(number, p),
        _ => Err(config_err(format!("figure {number}: expected 1..10"))),
    }
}

impl Figure {
    fn csv_name(&self, c: &Curve) -> String {
        format!("fig{}_{}.csv", self.number, c.slug)
    }

    /// gnuplot script; data files are referenced relative to the output
    /// directory, so run it from there.
    fn script(&self) -> String {
        let mut s = format!("# figure {}: {}\n", self.number, self.caption);
        s.push_str("# usage: gnuplot -persist this-file (from the output directory)\n");
        s.push_str("set datafile separator ','\n");
        s.push_str(&format!("set xlabel \"{}\"\nset ylabel \"{}\"\n", self.xlabel, self.ylabel));
        if self.logx {
            s.push_str("set logscale x\n");
        }
        if self.logy {
            s.push_str("set logscale y\n");
        }
        let plots: Vec<String> = self
            .curves
            .iter()
            .enumerate()
            .map(|(i, c)| format!("'{}' using 1:2 every ::1 with lines dt {} title \"{}\"", self.csv_name(c), i + 1, c.title))
            .collect();
        s.push_str(&format!("plot {}\n", plots.join(", \\\n     ")));
        s
    }

    /// Computes all curves in parallel and writes them in curve order.
    pub fn emit(&self, out: &OutDir) -> CliResult<()> {
        let total = self.curves.len();
        let tables = self
            .curves
            .par_iter()
            .map(|c| {
                let t = c.job.run();
                eprintln!("figure {}: curve {} done", self.number, c.slug);
                t
            })
            .collect::<Vec<_>>();
        for (c, t) in self.curves.iter().zip(tables) {
            out.write(&self.csv_name(c), &t?.render())?;
        }
        out.write(&format!("fig{}.gp", self.number), &self.script())?;
        eprintln!("figure {}: {total} curve(s)", self.number);
        Ok(())
    }
}
