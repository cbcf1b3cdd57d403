use std::path::PathBuf;
use std::process::{Command, Output};

use limitshape::sampler::Tableau;
use limitshape::stats::TrialReport;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_limitshape"));
    c.env_remove("LIMITSHAPE_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("limitshape-cli-{}-{name}", std::process::id()))
}

#[test]
fn dimension_of_small_squares() {
    for (n, want) in [("2", "2"), ("3", "42"), ("4", "24024")] {
        let o = run(&["dim", "--square", n]);
        assert!(o.status.success());
        assert_eq!(stdout(&o).trim(), want);
    }
    let o = run(&["dim", "--shape", "3,2,1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dimension"], "16");
}

#[test]
fn large_shapes_report_a_logarithm() {
    let o = run(&["dim", "--square", "30", "--exact-threshold", "100"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("exp("));
}

#[test]
fn surface_values() {
    let o = run(&["surface", "--x", "0.5", "--y", "0.5"]);
    assert_eq!(stdout(&o).trim(), "0.5");
    let o = run(&["surface", "--x", "0.6", "--y", "0"]);
    assert_eq!(stdout(&o).trim(), "0.1");
    let o = run(&["surface", "--x", "0.5", "--y", "0.25", "--theta", "0.5", "--pp"]);
    assert!(o.status.success());
    let m: f64 = stdout(&o).trim().parse().unwrap();
    assert!((m - 2f64.ln()).abs() < 1e-9, "{m}");
}

#[test]
fn half_level_curve_is_flat() {
    let o = run(&["level-curve", "--alpha", "0.5", "--N", "20", "--no-header"]);
    assert!(o.status.success());
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    let mut rows = 0;
    for rec in r.records() {
        let v: f64 = rec.unwrap()[1].parse().unwrap();
        assert!((v - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        rows += 1;
    }
    assert_eq!(rows, 21);
}

#[test]
fn csv_has_a_header_line_unless_suppressed() {
    let o = run(&["level-curve", "--alpha", "0.3", "--N", "4"]);
    let s = stdout(&o);
    assert!(s.starts_with("# limitshape "), "{s}");
    assert!(s.contains("\"alpha\":0.3"));
    let o = run(&["level-curve", "--alpha", "0.3", "--N", "4", "--no-header"]);
    assert!(stdout(&o).starts_with("u,v,x,y"));
}

#[test]
fn same_seed_gives_identical_files() {
    let (a, b) = (temp_path("a.json"), temp_path("b.json"));
    for p in [&a, &b] {
        let o = run(&["sample-tableau", "--n", "12", "--seed", "7", "--no-header", "-o", p.to_str().unwrap()]);
        assert!(o.status.success());
    }
    let (sa, sb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(sa, sb);
    let v: serde_json::Value = serde_json::from_slice(&sa).unwrap();
    let t: Tableau = serde_json::from_value(v["tableau"].clone()).unwrap();
    assert_eq!(t.square_side(), Some(12));
    let _ = std::fs::remove_file(a);
    let _ = std::fs::remove_file(b);
}

#[test]
fn seed_from_environment() {
    let flag = run(&["sample-tableau", "--n", "5", "--theta", "0.6", "--seed", "11"]);
    let env = bin()
        .args(["sample-tableau", "--n", "5", "--theta", "0.6"])
        .env("LIMITSHAPE_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(flag.stdout, env.stdout);
    assert!(String::from_utf8_lossy(&env.stderr).contains("\"seed_source\":\"env\""));
    let v: serde_json::Value = serde_json::from_slice(&flag.stdout).unwrap();
    assert_eq!((v["rows"].as_u64(), v["cols"].as_u64()), (Some(5), Some(3)));
}

#[test]
fn random_seed_is_logged() {
    let o = run(&["sample-tableau", "--n", "3"]);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("\"seed_source\":\"random\""), "{err}");
}

#[test]
fn contour_data_ignores_thread_count() {
    let a = run(&["contour-data", "--n", "10", "--trials", "3", "--seed", "2", "--no-header", "--jobs", "1"]);
    let b = run(&["contour-data", "--n", "10", "--trials", "3", "--seed", "2", "--no-header", "--jobs", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let mut r = csv::Reader::from_reader(a.stdout.as_slice());
    assert_eq!(r.headers().unwrap(), vec!["trial", "i", "j", "x", "y", "s", "l"]);
    assert_eq!(r.records().count(), 300);
}

#[test]
fn plane_partition_sample() {
    let o = run(&["sample-pp", "--n", "3", "--m", "200", "--seed", "5"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let pp: limitshape::partitions1d::PlanePartition = serde_json::from_value(v["plane_partition"].clone()).unwrap();
    assert_eq!(pp.total(), 200);
    assert!(pp.has_distinct_parts());
    let q = v["distinct_fraction"].as_f64().unwrap();
    assert!(q > 0.0 && q < 1.0);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["verify", "--suite", "bogus"]).status.code(), Some(2));
    assert_eq!(run(&["dim", "--shape", "1,2"]).status.code(), Some(2));
    assert_eq!(run(&["surface", "--x", "1.5", "--y", "0"]).status.code(), Some(2));
    assert_eq!(run(&["sample-tableau", "--n", "3", "--theta", "1.5"]).status.code(), Some(2));
    assert_eq!(run(&["sample-pp", "--n", "2", "--m", "5000000"]).status.code(), Some(3));
    assert_eq!(run(&["sample-tableau", "--n", "3000"]).status.code(), Some(3));
    let bad_env = bin().args(["sample-tableau", "--n", "3"]).env("LIMITSHAPE_SEED", "x").output().unwrap();
    assert_eq!(bad_env.status.code(), Some(2));
}

#[test]
fn exact_suite_passes_and_is_reproducible() {
    let a = run(&["verify", "--suite", "exact", "--no-header"]);
    let b = run(&["verify", "--suite", "exact", "--no-header", "--jobs", "2"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let reports: Vec<TrialReport> = stdout(&a).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(reports.len() >= 7);
    assert!(reports.iter().all(|r| r.pass && r.runtime_ms.is_none()));
}

#[test]
fn failing_reports_come_last() {
    let o = run(&["verify", "--suite", "montecarlo", "--format", "json"]);
    let reports: Vec<TrialReport> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let first_fail = reports.iter().position(|r| !r.pass);
    match first_fail {
        Some(i) => {
            assert_eq!(o.status.code(), Some(1));
            assert!(reports[i..].iter().all(|r| !r.pass));
        }
        None => assert!(o.status.success()),
    }
    assert!(reports.iter().all(|r| r.runtime_ms.is_some()));
}

#[test]
fn level_curve_points_lie_on_the_level_set() {
    let o = run(&["level-curve", "--alpha", "0.3", "--theta", "0.5", "--N", "30", "--no-header"]);
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    for rec in r.records() {
        let rec = rec.unwrap();
        let (x, y): (f64, f64) = (rec[2].parse().unwrap(), rec[3].parse().unwrap());
        if x > 1e-6 && y > 1e-6 && x < 1.0 - 1e-6 && y < 0.5 - 1e-6 {
            let l = limitshape::surfaces::rect_surface_l(0.5, x, y).unwrap();
            assert!((l - 0.3).abs() < 1e-6, "({x}, {y}) -> {l}");
        }
    }
}
