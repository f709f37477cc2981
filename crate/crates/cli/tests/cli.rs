use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use auxsync_cli::config::RunConfig;
use auxsync_cli::husimi::run_husimi;
use auxsync_cli::sweep::{run_sweep, ALPHA_HEADER, BETA_HEADER, DELTA_B_HEADER};
use auxsync_cli::table::Cell;
use auxsync_core::{closed_form_sq, effective_parameters, ClosedForm};
use serde_json::json;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_auxsync"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, v: serde_json::Value) -> String {
    let p = dir.join("config.json");
    std::fs::write(&p, v.to_string()).unwrap();
    p.to_string_lossy().into_owned()
}

fn nums(col: Vec<Cell>) -> Vec<f64> {
    col.iter()
        .map(|c| c.as_f64().expect("filled cell"))
        .collect()
}

#[test]
fn alpha_sweep_closed_form_endpoints() {
    let cfg = RunConfig::from_value(json!({
        "sweep": {"variable": "alpha", "start": -PI, "stop": PI, "points": 3},
        "solver": {"variant": "first-order"}
    }))
    .unwrap();
    let out = run_sweep(&cfg, Some(2)).unwrap();
    assert_eq!(out.table.header, ALPHA_HEADER);
    let closed = nums(out.table.column("sq_closed").unwrap());
    assert!(closed[0] < 1e-12 && closed[2] < 1e-12);
    assert!((closed[1] - 0.107).abs() < 1e-3);
    for name in ["sq_full", "sq_eff", "sq_pert"] {
        let v = nums(out.table.column(name).unwrap());
        assert!(v[1] > v[0] && v[1] > v[2], "{name}: {v:?}");
    }
}

#[test]
fn delta_b_sweep_columns_are_finite() {
    let cfg = RunConfig::from_value(json!({
        "sweep": {"variable": "delta_b", "start": 0.1, "stop": 1.0, "points": 4},
        "husimi": {"n_theta": 61, "n_phi": 120}
    }))
    .unwrap();
    let out = run_sweep(&cfg, None).unwrap();
    assert_eq!(out.table.header, DELTA_B_HEADER);
    assert!(out.non_unique.is_empty());
    for row in &out.table.rows {
        for cell in row {
            assert!(cell.as_f64().unwrap().is_finite());
        }
    }
}

#[test]
fn beta_sweep_endpoint_ratio() {
    let cfg = RunConfig::from_value(json!({
        "sweep": {"variable": "beta", "start": 0.0, "stop": 1.0, "points": 5},
        "approach": 1
    }))
    .unwrap();
    let out = run_sweep(&cfg, Some(1)).unwrap();
    assert_eq!(out.table.header, BETA_HEADER);
    let closed = nums(out.table.column("sq_closed").unwrap());
    let p = effective_parameters(&cfg.drive().unwrap(), &cfg.constants().unwrap()).unwrap();
    let expected = closed_form_sq(&p, ClosedForm::BetaApproach1(1.0))
        / closed_form_sq(&p, ClosedForm::BetaApproach1(0.0));
    assert!((closed[4] / closed[0] / expected - 1.0).abs() < 1e-6);
    assert_eq!(out.table.rows[0][1], Cell::Int(1));
}

#[test]
fn degenerate_reference_leaves_empty_fields() {
    let cfg = RunConfig::from_value(json!({
        "drive": {"omega_prime": 0.0, "delta_b": 0.0},
        "sweep": {"variable": "alpha", "start": 0.0, "stop": 1.0, "points": 2}
    }))
    .unwrap();
    let out = run_sweep(&cfg, None).unwrap();
    assert_eq!(out.non_unique, vec![0, 1]);
    assert!(out.table.rows[0][1..4].iter().all(|c| *c == Cell::Empty));
}

#[test]
fn middle_state_husimi_ring() {
    let cfg = RunConfig::from_value(json!({"drive": {"omega_0": 0.0}})).unwrap();
    let field = run_husimi(&cfg).unwrap();
    let (i, _) = field.argmax();
    let max = field.values[i].iter().copied().fold(f64::MIN, f64::max);
    assert!((max - 3.0 / (8.0 * PI)).abs() < 1e-9);
    assert!((field.theta[i] - PI / 2.0).abs() < 1e-12);
}

#[test]
fn zero_field_husimi_via_binary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), json!({"drive": {"delta_b": 0.0}}));
    let out = dir.path().join("q.csv");
    let o = bin(&["husimi", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    let norm: f64 = lines
        .next()
        .unwrap()
        .strip_prefix("# normalization=")
        .unwrap()
        .parse()
        .unwrap();
    assert!((norm - 1.0).abs() < 1e-6);
    assert_eq!(lines.next().unwrap(), "theta,phi,q");
    let rows: Vec<[f64; 3]> = lines
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            [v[0], v[1], v[2]]
        })
        .collect();
    assert_eq!(rows.len(), 181 * 360);
    assert!(rows.windows(2).all(|w| w[0][0] <= w[1][0]), "θ-major order");
    let best = rows.iter().max_by(|a, b| a[2].total_cmp(&b[2])).unwrap();
    assert!((best[0] - PI / 2.0).abs() <= 0.05);
    assert!(PI - best[1].abs() <= 0.02 * PI);
}

#[test]
fn sweep_output_is_deterministic_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        json!({"sweep": {"variable": "alpha", "start": 0.0, "stop": 6.0, "points": 9}}),
    );
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, jobs) in [(&a, "1"), (&b, "4")] {
        let o = bin(&[
            "sweep",
            "--config",
            &cfg,
            "--out",
            path.to_str().unwrap(),
            "--jobs",
            jobs,
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    assert!(text.starts_with("alpha,sq_full,sq_eff,sq_pert,sq_closed\n"));
    assert!(!text.contains('\r'));
    assert_eq!(text.lines().count(), 10);
}

#[test]
fn set_overrides_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        json!({"sweep": {"variable": "alpha", "start": 0.0, "stop": 1.0, "points": 2}}),
    );
    let o = bin(&[
        "sweep",
        "--config",
        &cfg,
        "--set",
        "sweep.variable=beta",
        "--set",
        "approach=2",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("beta,approach,sq_eff,sq_closed\n"));
    assert!(text.lines().nth(1).unwrap().starts_with("0,2,"));
}

#[test]
fn config_errors_exit_two_and_name_the_field() {
    let o = bin(&["steady", "--set", "drive.omega_plus=3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("omega_plus"));

    let o = bin(&[
        "sweep",
        "--set",
        "sweep={\"variable\":\"alpha\",\"start\":0,\"stop\":1,\"points\":1}",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("sweep.points"));

    let o = bin(&["sweep"]);
    assert_eq!(o.status.code(), Some(2));

    let o = bin(&["husimi", "--config", "/nonexistent/config.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn steady_reports_json() {
    let o = bin(&["steady", "--set", "model=full"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["unique"], json!(true));
    let sq = v["sq"].as_f64().unwrap();
    assert!((sq - 0.107).abs() < 0.01, "{sq}");

    let o = bin(&["steady", "--set", "solver.method=closed-form"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["sq"].as_f64().unwrap() - 0.107).abs() < 1e-3);
}

#[test]
fn evolve_reaches_middle_state_without_controls() {
    let o = bin(&[
        "evolve",
        "--set",
        "drive.omega_plus1=0",
        "--set",
        "drive.omega_minus1=0",
        "--set",
        "drive.omega_0=0",
        "--set",
        "evolve={\"t_stop\":20,\"points\":3,\"initial_state\":0}",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,p1,p2,p3,sq");
    let last: Vec<f64> = lines[3].split(',').map(|x| x.parse().unwrap()).collect();
    assert!((last[2] - 1.0).abs() < 1e-8);
}

#[test]
fn acceptance_detects_perturbed_constants() {
    let o = bin(&["acceptance", "--set", "constants.gamma_aux_dprime=6.6715"]);
    assert_ne!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
        .collect();
    assert_eq!(lines.len(), 11);
    assert!(lines[0].starts_with("FAIL  1 "), "{}", lines[0]);
}
