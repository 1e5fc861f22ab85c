//! End-to-end runs of the `prbm` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn prbm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prbm"))
        .args(args)
        .env_remove("PRBM_SEED")
        .output()
        .expect("failed to launch prbm")
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("prbm-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    d
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn density_csv_has_both_origins() {
    let o = prbm(&["density", "--gamma", "1", "--t", "1", "--x", "0+", "--grid", "-3:3:0.01"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x_value,x_side,y_value,y_side,density"));
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    assert_eq!(rows.len(), 602);
    let at = |side: &str| rows.iter().find(|r| r[3] == "0" && r[4] == side).unwrap()[5].parse::<f64>().unwrap();
    assert!((at("-") - 0.336).abs() < 1e-3);
    assert!((at("+") - 0.462).abs() < 1e-3);
}

#[test]
fn bad_arguments_exit_one() {
    for args in [
        vec!["density", "--gamma", "-1", "--t", "1", "--x", "0+", "--grid", "0:1:0.5"],
        vec!["density", "--gamma", "1", "--t", "0", "--x", "0+", "--grid", "0:1:0.5"],
        vec!["walk", "--bogus"],
        vec!["pde", "--gamma", "1", "--T", "1", "--scheme", "explicit", "--dx", "0.01", "--dt", "0.001"],
    ] {
        let o = prbm(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(prbm(&["--help"]).status.code(), Some(0));
}

#[test]
fn outputs_land_in_the_directory_with_a_manifest() {
    let dir = scratch("walk");
    let d = dir.to_str().unwrap();
    let o = prbm(&["walk", "--K", "2", "--n", "400", "--cn", "auto", "--gamma", "1", "--paths", "50", "--seed", "3", "--out-dir", d]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let manifest: Value = serde_json::from_slice(&std::fs::read(dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "walk");
    assert_eq!(manifest["seed"], 3);
    let summary: Value = serde_json::from_slice(&std::fs::read(dir.join("walk_summary.json")).unwrap()).unwrap();
    // auto attenuation is gamma K / sqrt(n)
    assert!((summary["c_n"].as_f64().unwrap() - 0.1).abs() < 1e-15);
    for out in manifest["outputs"].as_array().unwrap() {
        assert!(dir.join(out.as_str().unwrap()).exists());
    }
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn seeded_runs_repeat() {
    let args = ["simulate", "--sampler", "flip", "--gamma", "1", "--x0", "0+", "--T", "0.1", "--paths", "20", "--stride", "10", "--seed", "9"];
    let (a, b) = (prbm(&args), prbm(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let mut other = args.to_vec();
    *other.last_mut().unwrap() = "10";
    assert_ne!(a.stdout, prbm(&other).stdout);
}

#[test]
fn seed_from_environment() {
    let args = ["walk", "--n", "100", "--cn", "0.2", "--paths", "5"];
    let env = Command::new(env!("CARGO_BIN_EXE_prbm")).args(args).env("PRBM_SEED", "5").output().unwrap();
    let flag = prbm(&[&args[..], &["--seed", "5"]].concat());
    assert_eq!(env.stdout, flag.stdout);
}

#[test]
fn verify_reports_json_verdicts() {
    let o = prbm(&["verify", "--suite", "kernel", "--seed", "1"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], true);
    for verdict in v["verdicts"].as_array().unwrap() {
        for key in ["test_name", "statistic", "threshold", "pass"] {
            assert!(verdict.get(key).is_some(), "{key} missing");
        }
    }
    assert_eq!(o.stdout, prbm(&["verify", "--suite", "kernel", "--seed", "1"]).stdout);
}

#[test]
fn pde_profile_from_file() {
    let dir = scratch("pde");
    std::fs::create_dir_all(&dir).unwrap();
    let p0 = dir.join("p0.csv");
    std::fs::write(&p0, "x,side,p\n0,+,1\n10,+,1\n0,-,0\n-10,-,0\n").unwrap();
    let from_file = prbm(&["pde", "--gamma", "1", "--T", "0.5", "--dx", "0.05", "--dt", "0.005", "--p0", "file", "--p0-file", p0.to_str().unwrap()]);
    let step = prbm(&["pde", "--gamma", "1", "--T", "0.5", "--dx", "0.05", "--dt", "0.005", "--p0", "step"]);
    assert!(from_file.status.success(), "{}", String::from_utf8_lossy(&from_file.stderr));
    assert_eq!(from_file.stdout, step.stdout);
    let _ = std::fs::remove_dir_all(&dir);
}
