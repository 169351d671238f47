//! Flat `key = value` configuration with command-line overrides.
//!
//! Every key that is read gets marked; [`Params::finish`] rejects anything
//! left over so a typo never silently falls back to a default.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use num_complex::Complex64;
use qbm_core::dxx_solver::InitialConditionFamily;
use qbm_core::{
    coherent_state, dekker_min, high_temp_coefficients, steady_state, thermal_state, BathCoefficients,
    GaussianCVector, ModelCoefficients,
};

use crate::error::{config_err, CliError, CliResult};

#[derive(Debug, Default)]
pub struct Params {
    values: BTreeMap<String, String>,
    used: RefCell<BTreeSet<String>>,
}

fn split_pair(text: &str) -> CliResult<(String, String)> {
    let (k, v) = text
        .split_once('=')
        .ok_or_else(|| config_err(format!("expected key=value, got '{text}'")))?;
    let (k, v) = (k.trim(), v.trim());
    if k.is_empty() {
        return Err(config_err(format!("empty key in '{text}'")));
    }
    Ok((k.to_string(), v.to_string()))
}

impl Params {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut p = Params::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = split_pair(line).map_err(|e| config_err(format!("line {}: {e}", i + 1)))?;
            if p.values.insert(k.clone(), v).is_some() {
                return Err(config_err(format!("line {}: duplicate key '{k}'", i + 1)));
            }
        }
        Ok(p)
    }

    /// Config file (if any) with `--set` overrides applied on top.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> CliResult<Self> {
        let mut p = match path {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
                Params::parse(&text)?
            }
            None => Params::default(),
        };
        for o in overrides {
            let (k, v) = split_pair(o)?;
            p.values.insert(k, v);
        }
        Ok(p)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.used.borrow_mut().insert(key.to_string());
        self.values.get(key).map(String::as_str)
    }

    pub fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn f64(&self, key: &str) -> CliResult<Option<f64>> {
        self.raw(key).map(|v| parse_f64(key, v)).transpose()
    }

    pub fn f64_or(&self, key: &str, default: f64) -> CliResult<f64> {
        Ok(self.f64(key)?.unwrap_or(default))
    }

    pub fn require_f64(&self, key: &str) -> CliResult<f64> {
        self.f64(key)?.ok_or_else(|| config_err(format!("missing key '{key}'")))
    }

    pub fn usize_or(&self, key: &str, default: usize) -> CliResult<usize> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| config_err(format!("{key}: '{v}' is not a non-negative integer"))),
        }
    }

    pub fn str_or<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.raw(key).unwrap_or(default)
    }

    pub fn list_or(&self, key: &str, default: &[f64]) -> CliResult<Vec<f64>> {
        match self.raw(key) {
            None => Ok(default.to_vec()),
            Some(v) => {
                let list = v.split(',').map(|s| parse_f64(key, s.trim())).collect::<CliResult<Vec<_>>>()?;
                if list.is_empty() {
                    return Err(config_err(format!("{key}: empty list")));
                }
                Ok(list)
            }
        }
    }

    pub fn finish(&self) -> CliResult<()> {
        let used = self.used.borrow();
        let unknown: Vec<&str> = self.values.keys().filter(|k| !used.contains(*k)).map(String::as_str).collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(config_err(format!("unknown key(s) for this command: {}", unknown.join(","))))
        }
    }
}

fn parse_f64(key: &str, v: &str) -> CliResult<f64> {
    match v.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(config_err(format!("{key}: '{v}' is not a finite number"))),
    }
}

/// Bath from `temperature` + `omega_ratio` (high-temperature form) or from
/// explicit `dpp`, `dpx`.
pub fn bath(p: &Params) -> CliResult<BathCoefficients> {
    let gamma = p.require_f64("gamma")?;
    if p.has("temperature") || p.has("omega_ratio") {
        if p.has("dpp") || p.has("dpx") {
            return Err(config_err("give either temperature/omega_ratio or dpp/dpx, not both"));
        }
        let t = p.require_f64("temperature")?;
        let r = p.require_f64("omega_ratio")?;
        Ok(high_temp_coefficients(gamma, t, r)?)
    } else {
        Ok(BathCoefficients::new(gamma, p.require_f64("dpp")?, p.f64_or("dpx", 0.0)?)?)
    }
}

/// `dxx` as a number, or `min` for the Dekker minimum (the default).
pub fn model(p: &Params, bath: &BathCoefficients) -> CliResult<ModelCoefficients> {
    let dmin = dekker_min(bath)?;
    let dxx = match p.str_or("dxx", "min") {
        "min" => dmin,
        v => parse_f64("dxx", v)?,
    };
    let m = bath.with_dxx(dxx)?;
    if !m.is_cp_valid() {
        return Err(config_err(format!("dxx={dxx} is below the Dekker minimum {dmin}")));
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSpec {
    Ground,
    Coherent(Complex64),
    Thermal(f64),
    Steady,
    Custom(GaussianCVector),
    Family(InitialConditionFamily),
}

pub fn state_spec(p: &Params) -> CliResult<StateSpec> {
    let kind = p.str_or("state", "ground").to_string();
    Ok(match kind.as_str() {
        "ground" => StateSpec::Ground,
        "coherent" => StateSpec::Coherent(Complex64::new(p.f64_or("alpha_re", 0.0)?, p.f64_or("alpha_im", 0.0)?)),
        "thermal" => StateSpec::Thermal(p.require_f64("nbar")?),
        "steady" => StateSpec::Steady,
        "custom" => StateSpec::Custom(GaussianCVector::from_array([
            p.require_f64("c1")?,
            p.require_f64("c2")?,
            p.require_f64("c3")?,
            p.f64_or("c4", 0.0)?,
            p.f64_or("c5", 0.0)?,
            p.f64_or("c6", 0.0)?,
        ])),
        "displaced_squeezed" => StateSpec::Family(InitialConditionFamily::DisplacedSqueezed {
            c4: p.f64_or("c4", 1.0)?,
            c5: p.f64_or("c5", 1.0)?,
        }),
        "near_steady" => StateSpec::Family(InitialConditionFamily::NearSteady {
            x: p.f64_or("x", 0.1)?,
            y: p.f64_or("y", 0.0)?,
        }),
        "unrelated" => StateSpec::Family(InitialConditionFamily::Unrelated { x: p.f64_or("x", 50.0)? }),
        other => {
            return Err(config_err(format!(
                "state '{other}': expected ground, coherent, thermal, steady, custom, displaced_squeezed, near_steady or unrelated"
            )))
        }
    })
}

impl StateSpec {
    pub fn state(&self, m: &ModelCoefficients) -> CliResult<GaussianCVector> {
        let s = match *self {
            StateSpec::Ground => coherent_state(Complex64::new(0.0, 0.0)),
            StateSpec::Coherent(alpha) => coherent_state(alpha),
            StateSpec::Thermal(n) => thermal_state(n)?,
            StateSpec::Steady => steady_state(m)?,
            StateSpec::Custom(c) => c,
            StateSpec::Family(f) => f.state(m)?,
        };
        s.ensure_valid()?;
        Ok(s)
    }

    /// The state as a `D'xx`-dependent family for scans and the solver.
    pub fn family(&self) -> CliResult<InitialConditionFamily> {
        Ok(match *self {
            StateSpec::Family(f) => f,
            StateSpec::Steady => InitialConditionFamily::DisplacedSqueezed { c4: 0.0, c5: 0.0 },
            StateSpec::Ground => InitialConditionFamily::Fixed(coherent_state(Complex64::new(0.0, 0.0))),
            StateSpec::Coherent(alpha) => InitialConditionFamily::Fixed(coherent_state(alpha)),
            StateSpec::Thermal(n) => InitialConditionFamily::Fixed(thermal_state(n)?),
            StateSpec::Custom(c) => InitialConditionFamily::Fixed(c),
        })
    }
}

/// Evenly spaced `tau` from 0 to `tau_end`.
pub fn tau_grid(p: &Params) -> CliResult<Vec<f64>> {
    let end = p.f64_or("tau_end", 10.0)?;
    let n = p.usize_or("tau_points", 101)?;
    if !(end > 0.0) || n < 2 {
        return Err(config_err("need tau_end > 0 and tau_points >= 2"));
    }
    Ok(linspace(0.0, end, n))
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n).map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / last }).collect()
}

pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    linspace(a, b, n)
        .into_iter()
        .enumerate()
        .map(|(i, v)| if i == 0 { lo } else if i + 1 == n { hi } else { v.exp() })
        .collect()
}

/// `D'xx` grid from the Dekker minimum (or `dxx_lo`) to `dxx_max`.
pub fn dxx_grid(p: &Params, bath: &BathCoefficients, default_max: f64, default_points: usize, default_log: bool) -> CliResult<Vec<f64>> {
    let dmin = dekker_min(bath)?;
    let lo = p.f64_or("dxx_lo", dmin)?;
    let hi = p.f64_or("dxx_max", default_max)?;
    let n = p.usize_or("dxx_points", default_points)?;
    let log = match p.str_or("dxx_spacing", if default_log { "log" } else { "linear" }) {
        "log" => true,
        "linear" => false,
        other => return Err(config_err(format!("dxx_spacing '{other}': expected log or linear"))),
    };
    if lo < dmin * (1.0 - 1e-12) {
        return Err(config_err(format!("dxx_lo={lo} is below the Dekker minimum {dmin}")));
    }
    if !(hi > lo) || n < 2 {
        return Err(config_err(format!("need dxx_max > {lo} and dxx_points >= 2")));
    }
    Ok(if log { logspace(lo, hi, n) } else { linspace(lo, hi, n) })
}
