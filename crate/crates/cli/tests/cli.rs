use std::path::Path;
use std::process::{Command, Output};

use helmholtz_gaspt::dirichlet::BoundaryData;
use helmholtz_gaspt::fundsol::MediumParams;
use helmholtz_gaspt::green::QuarterDisk;
use helmholtz_gaspt::hyperfun::SeriesConfig;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_helmholtz-gaspt"))
        .args(args)
        .env_remove("HELMHOLTZ_GASPT_MAX_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Rows of a CSV output as header → value maps.
fn rows(o: &Output) -> Vec<std::collections::BTreeMap<String, String>> {
    let text = stdout(o);
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    lines
        .map(|l| header.iter().cloned().zip(l.split(',').map(String::from)).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap_or_else(|_| panic!("not a number: {s:?}"))
}

#[test]
fn three_by_three_grid_gives_nine_rows() {
    let o = run(&["eval-fundamental", "--grid", "3x3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 10);
    assert!(text.starts_with("x,y,value,abs_error_estimate,error\n"));
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["eval-green", "--grid", "3x2", "--lambda", "0.5", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let single = Command::new(env!("CARGO_BIN_EXE_helmholtz-gaspt"))
        .args(args)
        .env("HELMHOLTZ_GASPT_MAX_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, single.stdout);
}

#[test]
fn coincident_point_is_marked_with_keep_going() {
    let o = run(&[
        "eval-fundamental",
        "--grid",
        "3x3",
        "--source",
        "0.5,0.5",
        "--keep-going",
    ]);
    assert!(o.status.success());
    let r = rows(&o);
    assert_eq!(r.len(), 9);
    assert_eq!(r[4]["error"], "CoincidentPoints");
    assert_eq!(r[4]["value"], "");
    assert!(r.iter().enumerate().all(|(i, row)| i == 4 || row["error"].is_empty()));

    let o = run(&["eval-fundamental", "--grid", "3x3", "--source", "0.5,0.5"]);
    assert_eq!(o.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "CoincidentPoints");
}

#[test]
fn zero_data_solve_is_all_zero() {
    let o = run(&["solve", "--grid", "2x2", "--data", "zero", "--lambda", "0.7"]);
    assert!(o.status.success());
    for r in rows(&o) {
        assert_eq!(num(&r["value"]), 0.0);
    }
}

#[test]
fn exterior_pole_solve_cross_checks() {
    for family in ["pole4", "pole1"] {
        let o = run(&["solve", "--points", "0.3,0.4;0.6,0.15", "--data", family]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        for r in rows(&o) {
            assert!(num(&r["cross_check"]) <= 1e-9, "{family}: {r:?}");
            let (v, e) = (num(&r["value"]), num(&r["exact"]));
            assert!((v - e).abs() <= 1e-9 * e.abs(), "{family}: {r:?}");
        }
    }
}

fn write_samples(path: &Path, len: f64, n: usize, f: impl Fn(f64) -> f64) {
    let mut s = String::from("coordinate,value\n");
    for k in 0..n {
        let t = len * k as f64 / (n - 1) as f64;
        s += &format!("{t:e},{:e}\n", f(t));
    }
    std::fs::write(path, s).unwrap();
}

#[test]
fn tabulated_data_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let dom = QuarterDisk::new(1.0).unwrap();
    let m = MediumParams::new(0.2, 0.3, 0.0).unwrap();
    let data = BoundaryData::family("pole1", &dom, &m, &SeriesConfig::default()).unwrap();
    let paths: Vec<_> = ["tau1.csv", "tau2.csv", "phi.csv"]
        .iter()
        .map(|f| dir.path().join(f))
        .collect();
    write_samples(&paths[0], 1.0, 401, |x| data.tau1(x, &dom).unwrap());
    write_samples(&paths[1], 1.0, 401, |y| data.tau2(y, &dom).unwrap());
    write_samples(&paths[2], dom.arc_length(), 401, |s| data.phi(s, &dom).unwrap());
    let list = paths.iter().map(|p| p.to_str().unwrap()).collect::<Vec<_>>().join(",");
    let pts = "0.3,0.4;0.5,0.5";
    let tab = run(&["solve", "--points", pts, "--data", &list]);
    assert!(tab.status.success(), "{}", String::from_utf8_lossy(&tab.stderr));
    let fam = run(&["solve", "--points", pts, "--data", "pole1"]);
    for (a, b) in rows(&tab).iter().zip(rows(&fam)) {
        let (va, vb) = (num(&a["value"]), num(&b["value"]));
        assert!((va - vb).abs() <= 1e-4 * vb.abs(), "{va} vs {vb}");
        assert_eq!(a["exact"], "");
    }
}

#[test]
fn audit_passes_at_lambda_zero() {
    let o = run(&["audit"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["passed"], true);
    for r in report["records"].as_array().unwrap() {
        assert_eq!(r["status"], "pass", "{r}");
    }
}

#[test]
fn audit_marks_arc_vanishing_report_only_for_helmholtz() {
    let o = run(&["audit", "--lambda", "0.5"]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let arc = report["records"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["name"] == "arc_vanishing")
        .unwrap();
    assert_eq!(arc["status"], "report-only");
    assert!(arc["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn malformed_config_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "alpha = 0.3\nthis line has no separator\n").unwrap();
    let o = run(&["solve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "ConfigError");
    assert!(err["error"]["source"].as_str().unwrap().ends_with(":2"));

    std::fs::write(&cfg, "alpha = 0.7\n").unwrap();
    assert_eq!(
        run(&["audit", "--config", cfg.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["solve", "--grid", "3by3"]).status.code(), Some(2));
}

#[test]
fn flags_override_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "alpha = 0.3\nbeta = 0.1\ngrid = 2x2\n").unwrap();
    let c = cfg.to_str().unwrap();
    let mixed = run(&["eval-fundamental", "--config", c, "--alpha", "0.25"]);
    let flags = run(&["eval-fundamental", "--alpha", "0.25", "--beta", "0.1", "--grid", "2x2"]);
    let file = run(&["eval-fundamental", "--config", c]);
    assert!(mixed.status.success());
    assert_eq!(mixed.stdout, flags.stdout);
    assert_ne!(mixed.stdout, file.stdout);
}

#[test]
fn output_goes_to_the_requested_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("q.json");
    let o = run(&[
        "eval-fundamental",
        "--grid",
        "2x1",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert_eq!(v["columns"][0], "x");
}

#[test]
fn convergence_tables() {
    let o = run(&["convergence", "--sizes", "32,64,128"]);
    assert!(o.status.success());
    let r = rows(&o);
    assert_eq!(r.len(), 3);
    for row in &r[1..] {
        let ratio = num(&row["ratio"]);
        assert!((3.2..=4.8).contains(&ratio), "{row:?}");
    }
    let o = run(&["convergence", "--sizes", "32"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 2);
    assert!(!text.contains("ratio"));

    let o = run(&["convergence", "--study", "panels", "--sizes", "2,4,8"]);
    assert!(o.status.success());
    let errs: Vec<f64> = rows(&o).iter().map(|r| num(&r["max_relative_error"])).collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
}

#[test]
fn finite_difference_field() {
    let o = run(&["solve", "--fd", "16", "--data", "constant"]);
    assert!(o.status.success());
    let r = rows(&o);
    assert!(r.len() > 100);
    for row in r {
        assert!((num(&row["value"]) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn bad_thread_cap_is_a_config_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_helmholtz-gaspt"))
        .args(["eval-fundamental", "--grid", "1x1"])
        .env("HELMHOLTZ_GASPT_MAX_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
