//! Acceptance run: `prbm verify --suite all --seed 42`, twice.
//!
//! Prints one line per criterion and exits non-zero if any fails.

use std::collections::BTreeMap;
use std::process::{Command, Output};
use std::time::Instant;

use serde_json::Value;

/// Runtime limits in seconds, by criterion.
const RUNTIME_LIMITS: [(u8, f64); 3] = [(1, 1.0), (2, 10.0), (3, 300.0)];
/// The criterion 3 limit is stated for a multi-threaded host.
const MULTI_THREAD_CORES: usize = 4;

fn run_verify() -> (Output, f64) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_prbm"))
        .args(["verify", "--suite", "all", "--seed", "42"])
        .env_remove("PRBM_SEED")
        .output()
        .expect("failed to launch prbm");
    (out, start.elapsed().as_secs_f64())
}

fn timings(stderr: &str) -> BTreeMap<u8, f64> {
    let mut t = BTreeMap::new();
    for line in stderr.lines() {
        let Some(rest) = line.strip_prefix("criterion ") else { continue };
        let Some((c, tail)) = rest.split_once(" finished in ") else { continue };
        if let (Ok(c), Ok(s)) = (c.parse::<u8>(), tail.trim_end_matches('s').parse::<f64>()) {
            t.insert(c, s);
        }
    }
    t
}

fn main() {
    // Consecutive rather than concurrent, so that the timings are not contended.
    let (first, wall1) = run_verify();
    let (second, wall2) = run_verify();
    let stderr = String::from_utf8_lossy(&first.stderr);
    eprintln!("first run: {wall1:.1}s, exit {:?}; second run: {wall2:.1}s, exit {:?}", first.status.code(), second.status.code());

    let report: Value = match serde_json::from_slice(&first.stdout) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("{stderr}");
            println!("acceptance: verdict document unreadable: {e}");
            std::process::exit(1);
        }
    };
    let verdicts = report["verdicts"].as_array().cloned().unwrap_or_default();
    let times = timings(&stderr);
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());

    let mut all_pass = true;
    for c in 1..=10u8 {
        let mine: Vec<&Value> = verdicts.iter().filter(|v| v["criterion"].as_u64() == Some(c as u64)).collect();
        let failed: Vec<&str> = mine
            .iter()
            .filter(|v| v["pass"].as_bool() != Some(true))
            .filter_map(|v| v["test_name"].as_str())
            .collect();
        let mut pass = !mine.is_empty() && failed.is_empty();
        let mut notes = format!("{} checks", mine.len());
        if !failed.is_empty() {
            notes.push_str(&format!(", failed: {}", failed.join(", ")));
        }
        if let Some(&(_, limit)) = RUNTIME_LIMITS.iter().find(|(k, _)| *k == c) {
            match times.get(&c) {
                Some(&secs) if c == 3 && cores < MULTI_THREAD_CORES => {
                    notes.push_str(&format!(
                        ", runtime {secs:.1}s (limit {limit}s not enforced on {cores} core(s))"
                    ));
                }
                Some(&secs) => {
                    notes.push_str(&format!(", runtime {secs:.1}s (limit {limit}s)"));
                    pass &= secs < limit;
                }
                None => {
                    notes.push_str(", runtime missing");
                    pass = false;
                }
            }
        }
        all_pass &= pass;
        println!("criterion {c:>2}: {} ({notes})", if pass { "pass" } else { "FAIL" });
    }

    let identical = first.status.success() == second.status.success() && first.stdout == second.stdout && !first.stdout.is_empty();
    all_pass &= identical;
    println!(
        "criterion 11: {} ({} bytes of verdict JSON, {})",
        if identical { "pass" } else { "FAIL" },
        first.stdout.len(),
        if identical { "identical" } else { "runs differ" }
    );

    if !all_pass {
        eprintln!("{stderr}");
        std::process::exit(1);
    }
}
