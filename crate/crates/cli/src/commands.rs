use qbm_core::dxx_solver::{classify_and_solve, diosi_dxx, scan_sigma, InitialConditionFamily};
use qbm_core::dynamics::default_step;
use qbm_core::entropy::relative_entropy;
use qbm_core::spectral::{eigendecompose, gram_matrix, verify_eigenpair, QuadratureGrid};
use qbm_core::{
    entropy_production, propagate_analytic, propagate_numeric, steady_state, BathCoefficients,
    Error as CoreError, GaussianCVector, ModelCoefficients,
};

use crate::config::{self, Params, StateSpec};
use crate::error::{config_err, CliResult};
use crate::output::{fmt_f64, OutDir, Report, Table};

fn trajectory(p: &Params, m: &ModelCoefficients, s0: &GaussianCVector) -> CliResult<(Vec<f64>, Vec<GaussianCVector>)> {
    let taus = config::tau_grid(p)?;
    let run = match p.str_or("method", "analytic") {
        "analytic" => {
            p.raw("step");
            propagate_analytic(s0, m, &taus)?
        }
        "numeric" => {
            let step = p.f64_or("step", default_step(m))?;
            propagate_numeric(s0, m, &taus, step)?
        }
        other => return Err(config_err(format!("method '{other}': expected analytic or numeric"))),
    };
    if run.degenerate {
        eprintln!("note: gamma' is at the critically damped point; integrated numerically");
    }
    Ok((run.times, run.states))
}

fn setup(p: &Params) -> CliResult<(ModelCoefficients, GaussianCVector)> {
    let bath = config::bath(p)?;
    let m = config::model(p, &bath)?;
    let s0 = config::state_spec(p)?.state(&m)?;
    Ok((m, s0))
}

/// `tau,c1,...,c6,nbar` along the trajectory. `frame=natural` (default)
/// writes the coefficients the equations of motion use; `frame=symmetric`
/// writes them in the quadrature frame where the ground state is
/// `(1/4, 0, 1/4)`.
pub fn evolve(p: &Params, out: &OutDir) -> CliResult<()> {
    let (m, s0) = setup(p)?;
    let symmetric = match p.str_or("frame", "natural") {
        "natural" => false,
        "symmetric" => true,
        other => return Err(config_err(format!("frame '{other}': expected natural or symmetric"))),
    };
    let (times, states) = trajectory(p, &m, &s0)?;
    p.finish()?;
    let mut t = Table::new(&["tau", "c1", "c2", "c3", "c4", "c5", "c6", "nbar"]);
    for (tau, s) in times.iter().zip(&states) {
        let c = if symmetric { s.to_symmetric_frame() } else { s.to_array() };
        t.push(&[*tau, c[0], c[1], c[2], c[3], c[4], c[5], s.nbar()?]);
    }
    out.write("evolve.csv", &t.render())?;
    Ok(())
}

/// Relative entropy to the steady state along the trajectory, plus a
/// summary with the entropy production of the initial state.
pub fn rel_entropy(p: &Params, out: &OutDir) -> CliResult<()> {
    let (m, s0) = setup(p)?;
    let (times, states) = trajectory(p, &m, &s0)?;
    p.finish()?;
    let mut t = Table::new(&["tau", "s_rel", "nbar"]);
    for (tau, s) in times.iter().zip(&states) {
        t.push(&[*tau, relative_entropy(s, &m)?, s.nbar()?]);
    }
    out.write("rel_entropy.csv", &t.render())?;

    let mut r = Report::default();
    coefficient_lines(&mut r, &m.bath());
    r.num("dxx", m.dxx);
    r.num("nbar_0", s0.nbar()?);
    r.num("nbar_st", steady_state(&m)?.nbar()?);
    match entropy_production(&s0, &m) {
        Ok(sigma) => r.num("sigma", sigma),
        Err(CoreError::DivergentEntropy(why)) => r.text("sigma", format!("inf ({why})")),
        Err(e) => return Err(e.into()),
    }
    out.write("rel_entropy.txt", &r.render())?;
    Ok(())
}

/// `sigma / w` over a `D'xx` grid.
pub fn sigma_scan(p: &Params, out: &OutDir) -> CliResult<()> {
    let bath = config::bath(p)?;
    let family = config::state_spec(p)?.family()?;
    let grid = config::dxx_grid(p, &bath, 1e3, 200, true)?;
    p.finish()?;
    let points = scan_sigma(&family, &bath, &grid)?;
    let mut t = Table::new(&["dxx", "sigma"]);
    for pt in points {
        t.push_cells(vec![fmt_f64(pt.dxx), pt.sigma.map_or_else(|| "inf".to_string(), fmt_f64)]);
    }
    out.write("sigma_scan.csv", &t.render())?;
    Ok(())
}

fn coefficient_lines(r: &mut Report, bath: &BathCoefficients) {
    r.num("gamma", bath.gamma);
    r.num("dpp", bath.dpp);
    r.num("dpx", bath.dpx);
    if let Some(h) = bath.high_temp {
        r.num("temperature", h.temperature);
        r.num("omega_ratio", h.omega_ratio);
    }
}

fn family_label(f: &InitialConditionFamily) -> String {
    match f {
        InitialConditionFamily::DisplacedSqueezed { c4, c5 } => format!("displaced_squeezed(c4={c4}, c5={c5})"),
        InitialConditionFamily::NearSteady { x, y } => format!("near_steady(x={x}, y={y})"),
        InitialConditionFamily::Unrelated { x } => format!("unrelated(x={x})"),
        InitialConditionFamily::Fixed(s) => format!("fixed{:?}", s.to_array()),
    }
}

/// Selects `D'xx` for the configured initial-state family and writes a
/// text summary followed by a `key=value` block.
pub fn solve_dxx(p: &Params, out: &OutDir) -> CliResult<()> {
    let bath = config::bath(p)?;
    if !p.has("state") {
        return Err(config_err("solve-dxx needs a state (e.g. state=displaced_squeezed)"));
    }
    let family = config::state_spec(p)?.family()?;
    p.finish()?;
    let res = classify_and_solve(&family, &bath)?;

    let mut text = String::new();
    text.push_str(&format!("family: {}\n", family_label(&family)));
    text.push_str(&format!(
        "selected D'xx = {} ({} of sigma{}, regime {})\n",
        fmt_f64(res.dxx_selected),
        res.kind.label(),
        if res.clamped { ", clamped to the Dekker minimum" } else { "" },
        res.regime.label()
    ));
    text.push_str(&format!("Dekker minimum D'xx = {}\n", fmt_f64(res.dekker_min)));
    match (res.reference, res.reference_gap()) {
        (Some(r), Some(g)) => text.push_str(&format!(
            "high-temperature reference D'xx = {} (relative gap {:+.3}%)\n",
            fmt_f64(r),
            100.0 * g
        )),
        _ => text.push_str("high-temperature reference: unavailable\n"),
    }
    let diosi = diosi_dxx(&bath);
    match diosi {
        Some(d) => text.push_str(&format!(
            "Diosi value gamma/(6 m kB T) = gamma'/(3 T') = {} (selected / Diosi = {})\n",
            fmt_f64(d),
            fmt_f64(res.dxx_selected / d)
        )),
        None => text.push_str("Diosi value: needs temperature\n"),
    }
    for w in &res.warnings {
        text.push_str(&format!("warning: {w}\n"));
    }

    let mut r = Report::default();
    r.text("family", family_label(&family));
    coefficient_lines(&mut r, &bath);
    r.num("dxx_selected", res.dxx_selected);
    r.text("kind", res.kind.label());
    r.text("clamped", res.clamped.to_string());
    r.text("regime", res.regime.label());
    r.num("dekker_min", res.dekker_min);
    r.num("sigma_at_selected", res.objective);
    if let Some(v) = res.reference {
        r.num("reference", v);
    }
    if let Some(g) = res.reference_gap() {
        r.num("reference_gap", g);
    }
    if let Some(d) = diosi {
        r.num("diosi_dxx", d);
    }
    if let Some(poly) = &res.polynomial {
        r.text("polynomial_degree", poly.degree.to_string());
        r.text(
            "polynomial_real_roots",
            poly.real_roots.iter().map(|&v| fmt_f64(v)).collect::<Vec<_>>().join(";"),
        );
        r.num("polynomial_selected", poly.selected);
        r.text("polynomial_fallback", poly.fallback.to_string());
    }
    r.text("search_bracket", format!("{};{}", fmt_f64(res.diagnostics.bracket.0), fmt_f64(res.diagnostics.bracket.1)));
    r.text("search_evaluations", res.diagnostics.evaluations.to_string());
    r.num("stationarity_residual", res.diagnostics.stationarity_residual);
    r.text("warnings", res.warnings.len().to_string());

    text.push('\n');
    text.push_str(&r.render());
    out.write("solve_dxx.txt", &text)?;
    Ok(())
}

/// Eigenvalues from the occupation number and from the position-space
/// eigenproblem, with the quadrature residual of every eigenpair.
pub fn spectrum(p: &Params, out: &OutDir) -> CliResult<()> {
    let spec = config::state_spec(p)?;
    let s = match spec {
        StateSpec::Steady | StateSpec::Family(_) => {
            let bath = config::bath(p)?;
            spec.state(&config::model(p, &bath)?)?
        }
        // placeholder coefficients: these states do not depend on them
        _ => spec.state(&ModelCoefficients::new(1.0, 1.0, 0.0, 1.0)?)?,
    };
    let n_max = p.usize_or("n_max", 10)?;
    let points = p.usize_or("quad_points", 2000)?;
    p.finish()?;
    if n_max > 200 {
        return Err(config_err("n_max must be <= 200"));
    }
    let lam = s.spectrum(n_max)?;
    let kernel = s.to_position_kernel()?;
    let sys = eigendecompose(&kernel, n_max)?;
    let grid = QuadratureGrid::for_eigensystem(&sys, n_max, points)?;
    let mut t = Table::new(&["n", "lambda", "eps", "residual"]);
    let mut worst = (0.0f64, 0.0f64);
    for n in 0..=n_max {
        let res = verify_eigenpair(&kernel, &sys, n, &grid)?;
        let (l, e) = (lam.eigenvalues[n], sys.eigenvalue(n));
        worst = (worst.0.max((l - e).abs()), worst.1.max(res));
        t.push(&[n as f64, l, e, res]);
    }
    out.write("spectrum.csv", &t.render())?;

    let gram_defect = gram_matrix(&sys, &grid)
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, v)| (v - if i == j { 1.0 } else { 0.0 }).norm()))
        .fold(0.0f64, f64::max);
    let mut r = Report::default();
    r.num("nbar", s.nbar()?);
    r.num("ratio", lam.ratio);
    r.num("tail", lam.tail);
    r.num("max_eigenvalue_mismatch", worst.0);
    r.num("max_residual", worst.1);
    r.num("gram_defect", gram_defect);
    if s.validate().is_pure() {
        r.text("note", "pure state: a single nonzero eigenvalue");
    }
    out.write("spectrum.txt", &r.render())?;
    Ok(())
}
