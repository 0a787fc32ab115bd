use std::io::Write;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;

fn dmoments(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dmoments"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

fn knot_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".csv").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

const SQUARE: &str = "x,y\n0,0\n1,0\n0,1\n1,1\n";

#[test]
fn moment_matches_expansion() {
    let f = knot_file(SQUARE);
    let path = f.path().to_str().unwrap();
    let auto = dmoments(&["moment", "--knots", path, "--beta", "2,1", "--params", "ones"]);
    assert!(auto.status.success());
    let auto = json(&auto);
    let exp = json(&dmoments(&[
        "moment", "--knots", path, "--beta", "2,1", "--params", "ones", "--strategy", "expansion",
    ]));
    let (a, e) = (auto["value"].as_f64().unwrap(), exp["value"].as_f64().unwrap());
    assert!((a - e).abs() < 1e-12 * e, "{a} vs {e}");
    assert!(auto["table-size"].as_u64().is_some());
    assert_eq!(exp["strategy"], "expansion");
}

#[test]
fn moment_table_rows() {
    let f = knot_file("0\n1\n2\n");
    let out = dmoments(&["moment", "--knots", f.path().to_str().unwrap(), "--max-order", "2", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "beta,value,strategy,table-size");
    assert_eq!(lines.len(), 4);
    // m_2 on {0,1,2} = 7/6.
    let m2: f64 = lines[3].split(',').nth(1).unwrap().parse().unwrap();
    assert!((m2 - 7.0 / 6.0).abs() < 1e-12);
}

#[test]
fn trivial_lauricella() {
    let out = dmoments(&["lauricella", "--j", "0,0", "--beta", "0.5,0.5", "--gamma", "2", "--x", "0.1,0.2"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["value"], 1.0);
}

#[test]
fn lauricella_methods_agree() {
    let out = dmoments(&[
        "lauricella", "--j", "2,3", "--beta", "0.5,0.7", "--gamma", "2.5", "--x", "0.1,0.6", "--method", "all",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["agree"], true);
    assert_eq!(v["results"].as_array().unwrap().len(), 3);
}

#[test]
fn hypergeometric_desk_values() {
    let r = json(&dmoments(&["r-hyper", "--a", "1", "--params", "1,1", "--z", "1,2"]));
    assert!((r["value"].as_f64().unwrap() - std::f64::consts::LN_2).abs() < 1e-12);
    let s = json(&dmoments(&["s-hyper", "--params", "1,1", "--z", "0,1", "--method", "divided-difference"]));
    assert!((s["value"].as_f64().unwrap() - (std::f64::consts::E - 1.0)).abs() < 1e-14);
    let f = json(&dmoments(&[
        "f4", "--alpha", "1", "--beta", "0.9", "--gamma", "1.3", "--delta", "1.2", "--x1", "0.15", "--x2", "0.1",
        "--method", "both",
    ]));
    assert_eq!(f["agree"], true);
    let fb = json(&dmoments(&["fb", "--alpha", "0.7", "--beta", "1.1", "--gamma", "1.9", "--x", "0"]));
    assert_eq!(fb["value"], 1.0);
}

#[test]
fn exit_statuses() {
    // Malformed input.
    assert_eq!(dmoments(&["moment", "--knots", "/nonexistent.csv", "--beta", "1"]).status.code(), Some(2));
    assert_eq!(dmoments(&["lauricella", "--j", "x", "--beta", "1", "--gamma", "2", "--x", "0.1"]).status.code(), Some(2));
    assert_eq!(dmoments(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(dmoments(&["verify", "--suite", "bogus"]).status.code(), Some(2));
    // Domain and precondition violations.
    let out = dmoments(&["r-hyper", "--a", "1.5", "--params", "1,1", "--z", "-1,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("0 lies in [Z]"));
    let f = knot_file("0,0\n1,1\n2,2\n");
    let flat = f.path().to_str().unwrap();
    let out = dmoments(&["moment", "--knots", flat, "--beta", "1,1", "--strategy", "recurrence-54"]);
    assert_eq!(out.status.code(), Some(1));
    // Auto falls back to a strategy whose preconditions hold.
    assert_eq!(dmoments(&["moment", "--knots", flat, "--beta", "1,1"]).status.code(), Some(0));
    let out = dmoments(&["s-hyper", "--params", "1.5,1", "--z", "0,1", "--method", "divided-difference"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn watson_suite_example() {
    let out = dmoments(&["verify", "--suite", "watson", "--seed", "7"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["passed"], true);
    for row in v["results"].as_array().unwrap() {
        assert!(row["max-residual"].as_f64().unwrap() <= 1e-9);
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let f = knot_file(SQUARE);
    let path = f.path().to_str().unwrap();
    let jobs: [&[&str]; 3] = [
        &["moment", "--knots", path, "--max-order", "3", "--params", "1,2,1.5,0.5", "--format", "csv"],
        &["verify", "--suite", "negative-moment", "--seed", "11"],
        &["r-hyper", "--a", "0.7", "--params", "0.5,1.5", "--z", "0.3,1.7", "--format", "plain"],
    ];
    for job in jobs {
        let (a, b) = (dmoments(job), dmoments(job));
        assert!(a.status.success(), "{job:?}");
        assert_eq!(a.stdout, b.stdout, "{job:?}");
    }
}

#[test]
fn full_verification_within_budget() {
    let start = Instant::now();
    let a = dmoments(&["verify", "--suite", "all", "--seed", "2024"]);
    let elapsed = start.elapsed();
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert!(elapsed < Duration::from_secs(120), "{elapsed:?}");
    let b = dmoments(&["verify", "--suite", "all", "--seed", "2024"]);
    assert_eq!(a.stdout, b.stdout);
}
