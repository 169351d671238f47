use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qbm_core::entropy::entropy_production_displaced_squeezed;
use qbm_core::{dekker_min, steady_state, BathCoefficients, ModelCoefficients};
use tempfile::TempDir;

fn qbm(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qbm"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], out: &Path) {
    let o = qbm(args, out);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty(), "results belong in files, not stdout");
}

fn sets(kv: &[&str]) -> Vec<String> {
    kv.iter().flat_map(|s| ["--set".to_string(), s.to_string()]).collect()
}

fn run_with(cmd: &[&str], kv: &[&str], out: &Path) -> Output {
    let mut args: Vec<String> = cmd.iter().map(|s| s.to_string()).collect();
    args.extend(sets(kv));
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    qbm(&refs, out)
}

fn ok_with(cmd: &[&str], kv: &[&str], out: &Path) {
    let o = run_with(cmd, kv, out);
    assert!(o.status.success(), "{cmd:?} {kv:?}: {}", String::from_utf8_lossy(&o.stderr));
}

fn csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse::<f64>().unwrap_or(f64::INFINITY)).collect())
        .collect();
    (header, rows)
}

fn report(path: &Path) -> Vec<(String, String)> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter_map(|l| l.split_once('=').map(|(k, v)| (k.to_string(), v.to_string())))
        .filter(|(k, _)| !k.contains(' '))
        .collect()
}

fn value(r: &[(String, String)], key: &str) -> String {
    r.iter().find(|(k, _)| k == key).unwrap_or_else(|| panic!("no {key}")).1.clone()
}

const FDS: [&str; 3] = ["gamma=1", "dpp=2", "dpx=0.2"];

#[test]
fn evolve_ground_state_first_row() {
    let dir = TempDir::new().unwrap();
    ok_with(&["evolve"], &[&FDS[..], &["state=ground", "frame=symmetric"]].concat(), dir.path());
    let (header, rows) = csv(&dir.path().join("evolve.csv"));
    assert_eq!(header, ["tau", "c1", "c2", "c3", "c4", "c5", "c6", "nbar"]);
    assert_eq!(&rows[0][..4], &[0.0, 0.25, 0.0, 0.25]);
    assert_eq!(rows[0][7], 0.0);
    assert!(rows.windows(2).all(|w| w[1][0] > w[0][0]));
}

#[test]
fn evolve_long_run_reaches_steady_state() {
    let dir = TempDir::new().unwrap();
    let kv = ["gamma=0.5", "dpp=2", "dpx=0.2", "state=coherent", "alpha_re=1", "alpha_im=-1", "tau_end=120"];
    ok_with(&["evolve"], &kv, dir.path());
    let (_, rows) = csv(&dir.path().join("evolve.csv"));
    let m = ModelCoefficients::new(0.5, 2.0, 0.2, dekker_min(&BathCoefficients::new(0.5, 2.0, 0.2).unwrap()).unwrap())
        .unwrap();
    let st = steady_state(&m).unwrap().to_array();
    let last = rows.last().unwrap();
    for i in 0..6 {
        assert!((last[i + 1] - st[i]).abs() < 1e-9, "c{} {} vs {}", i + 1, last[i + 1], st[i]);
    }
}

#[test]
fn outputs_are_byte_identical_on_rerun() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    for d in [&a, &b] {
        ok_with(&["evolve"], &[&FDS[..], &["state=thermal", "nbar=2", "method=numeric"]].concat(), d.path());
        ok(&["figure", "9"], d.path());
    }
    for name in ["evolve.csv", "fig9_gamma_1.csv", "fig9_gamma_2.csv", "fig9.gp"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
}

#[test]
fn invalid_input_exits_with_two() {
    let dir = TempDir::new().unwrap();
    for kv in [
        vec!["gamma=-1", "dpp=2"],
        vec!["gamma=1", "dpp=2", "gamam=3"],
        vec!["gamma=1", "dpp=2", "dxx=0.01"],
        vec!["gamma=1", "dpp=2", "state=custom", "c1=0.25", "c2=0", "c3=0.125"],
        vec!["gamma=1"],
    ] {
        let o = run_with(&["evolve"], &kv, dir.path());
        assert_eq!(o.status.code(), Some(2), "{kv:?}");
        let err = String::from_utf8_lossy(&o.stderr);
        let last = err.lines().last().unwrap();
        assert!(last.starts_with("error: "), "{err}");
    }
    assert_eq!(qbm(&["figure", "11"], dir.path()).status.code(), Some(2));
    assert_eq!(
        qbm(&["evolve", "--config", "/nonexistent/qbm.cfg"], dir.path()).status.code(),
        Some(2)
    );
}

#[test]
fn solver_failure_exits_with_three() {
    // far outside the high-temperature regime the quartic and the direct
    // search disagree, which the solver reports instead of guessing
    let dir = TempDir::new().unwrap();
    let kv = ["state=unrelated", "x=10", "gamma=5", "temperature=2", "omega_ratio=0.1"];
    let o = run_with(&["solve-dxx"], &kv, dir.path());
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn config_file_with_overrides() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# bath\ngamma = 1\ntemperature = 100\nomega_ratio = 0.1\nstate = unrelated\nx = 50\ndxx_points = 50\n")
        .unwrap();
    let out: PathBuf = dir.path().join("scan");
    let cfg_s = cfg.to_str().unwrap();
    ok(&["sigma-scan", "--config", cfg_s, "--set", "dxx_spacing=linear", "--set", "dxx_max=60"], &out);
    let (header, rows) = csv(&out.join("sigma_scan.csv"));
    assert_eq!(header, ["dxx", "sigma"]);
    assert_eq!(rows.len(), 50);
    assert_eq!(rows[49][0], 60.0);
    // the interior minimum sits near 24.4 for these parameters
    let argmin = rows.iter().min_by(|a, b| a[1].total_cmp(&b[1])).unwrap()[0];
    assert!((argmin - 24.4).abs() < 1.5, "{argmin}");
}

#[test]
fn solve_dxx_displaced_squeezed_report() {
    let dir = TempDir::new().unwrap();
    let kv = ["state=displaced_squeezed", "gamma=1", "temperature=100", "omega_ratio=0.1"];
    ok_with(&["solve-dxx"], &kv, dir.path());
    let path = dir.path().join("solve_dxx.txt");
    let r = report(&path);
    let selected: f64 = value(&r, "dxx_selected").parse().unwrap();
    let reference: f64 = value(&r, "reference").parse().unwrap();
    assert!((reference - 400.0 * 1.2f64.sqrt()).abs() < 1e-9);
    assert!((selected - 438.0).abs() < 1.0, "{selected}");
    assert!(value(&r, "reference_gap").parse::<f64>().unwrap().abs() < 0.01);
    assert_eq!(value(&r, "clamped"), "false");
    assert_eq!(value(&r, "kind"), "global_max");
    assert_eq!(value(&r, "dekker_min").parse::<f64>().unwrap(), 1.0025);
    assert!((value(&r, "diosi_dxx").parse::<f64>().unwrap() - 1.0 / 300.0).abs() < 1e-15);
    assert!(fs::read_to_string(&path).unwrap().contains("Diosi value"));
}

#[test]
fn solve_dxx_near_steady_clamps_at_critical_damping() {
    let dir = TempDir::new().unwrap();
    let kv = ["state=near_steady", "x=0.1", "gamma=1", "temperature=100", "omega_ratio=0.1"];
    ok_with(&["solve-dxx"], &kv, dir.path());
    let r = report(&dir.path().join("solve_dxx.txt"));
    assert_eq!(value(&r, "clamped"), "true");
    assert_eq!(value(&r, "dxx_selected"), value(&r, "dekker_min"));
    assert_eq!(value(&r, "regime"), "near_steady");
}

#[test]
fn spectrum_of_thermal_state_is_geometric() {
    let dir = TempDir::new().unwrap();
    ok_with(&["spectrum"], &["state=thermal", "nbar=2", "n_max=8"], dir.path());
    let (header, rows) = csv(&dir.path().join("spectrum.csv"));
    assert_eq!(header, ["n", "lambda", "eps", "residual"]);
    for r in &rows {
        let want = (1.0 / 3.0) * (2.0f64 / 3.0).powi(r[0] as i32);
        assert!((r[1] - want).abs() < 1e-14 && (r[2] - want).abs() < 1e-10, "{r:?}");
        assert!(r[3] < 1e-6);
    }
    let rep = report(&dir.path().join("spectrum.txt"));
    assert!(value(&rep, "gram_defect").parse::<f64>().unwrap() < 1e-6);
}

#[test]
fn rel_entropy_decreases_along_trajectory() {
    let dir = TempDir::new().unwrap();
    ok_with(&["rel-entropy"], &[&FDS[..], &["state=thermal", "nbar=2", "tau_end=20"]].concat(), dir.path());
    let (_, rows) = csv(&dir.path().join("rel_entropy.csv"));
    assert!(rows.windows(2).all(|w| w[1][1] <= w[0][1] + 1e-12));
    assert!(rows.last().unwrap()[1] < 1e-3 * rows[0][1]);
    let r = report(&dir.path().join("rel_entropy.txt"));
    assert!(value(&r, "sigma").parse::<f64>().unwrap() > 0.0);
}

#[test]
fn figure_1_curves_decrease() {
    let dir = TempDir::new().unwrap();
    ok(&["figure", "1"], dir.path());
    for g in ["0.1", "1", "10"] {
        let (header, rows) = csv(&dir.path().join(format!("fig1_gamma_{g}.csv")));
        assert_eq!(header, ["tau", "s_rel"]);
        assert!(rows.windows(2).all(|w| w[1][1] <= w[0][1] + 1e-9), "gamma'={g}");
        assert!(rows.last().unwrap()[1] < rows[0][1]);
    }
    let script = fs::read_to_string(dir.path().join("fig1.gp")).unwrap();
    assert!(script.contains("'fig1_gamma_10.csv'") && !script.contains(dir.path().to_str().unwrap()));
}

#[test]
fn figure_4_matches_closed_form() {
    let dir = TempDir::new().unwrap();
    ok(&["figure", "4"], dir.path());
    for g in [0.8, 1.0, 1.2] {
        let bath = BathCoefficients::new(g, 2.0 * g, 0.2 * g).unwrap();
        let (_, rows) = csv(&dir.path().join(format!("fig4_gamma_{g}.csv")));
        assert_eq!(rows[0][0], dekker_min(&bath).unwrap());
        for r in &rows {
            let want = entropy_production_displaced_squeezed(2.0, 2.0, &bath.with_dxx(r[0]).unwrap()).unwrap();
            assert!((r[1] - want).abs() <= 1e-10 * want.abs(), "{r:?} vs {want}");
        }
    }
}

#[test]
fn figure_9_minima_move_down_with_damping() {
    let dir = TempDir::new().unwrap();
    ok_with(&["figure", "9"], &["dxx_points=600"], dir.path());
    let argmins: Vec<f64> = ["1", "2", "3"]
        .iter()
        .map(|g| {
            let (_, rows) = csv(&dir.path().join(format!("fig9_gamma_{g}.csv")));
            rows.iter().min_by(|a, b| a[1].total_cmp(&b[1])).unwrap()[0]
        })
        .collect();
    assert!(argmins[0] > argmins[1] && argmins[1] > argmins[2], "{argmins:?}");
}

#[test]
fn figure_overrides_and_unknown_keys() {
    let dir = TempDir::new().unwrap();
    ok_with(&["figure", "10"], &["temperatures=100,150", "dxx_points=20"], dir.path());
    assert!(dir.path().join("fig10_T_150.csv").exists());
    assert!(!dir.path().join("fig10_T_125.csv").exists());
    let o = run_with(&["figure", "10"], &["temperatuers=100"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}
