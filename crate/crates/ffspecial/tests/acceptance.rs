//! Acceptance suite: the fifteen criteria at their stated tolerances, plus the command-line
//! examples. Prints one line per criterion.

use std::io::Write;
use std::path::PathBuf;
use std::process::Command;

use ffspecial::report::Status;
use ffspecial::selftest::{selftest, SelftestConfig};

#[test]
fn acceptance_criteria() {
    let cfg = SelftestConfig { seed: 20_240_601, v_floor: 40 };
    let first = selftest(cfg, None).unwrap();
    let second = selftest(cfg, None).unwrap();
    let mut failed = Vec::new();
    let mut lines = String::new();
    for c in &first.criteria {
        let ok = c.status == Status::Pass;
        lines.push_str(&format!("criterion {:>2} {:<48} {}\n", c.id, c.title, if ok { "PASS" } else { "FAIL" }));
        if !ok {
            for ch in c.outcome.checks.iter().filter(|ch| !ch.pass) {
                lines.push_str(&format!("    failed check: {} residual {:?}\n", ch.name, ch.residual));
            }
            if let Some(e) = &c.outcome.error {
                lines.push_str(&format!("    error: {}\n", e.message));
            }
            failed.push(c.id);
        }
    }
    let same = first.to_json() == second.to_json();
    lines.push_str(&format!("criterion 15 {:<48} {}\n", "whole selftest report byte-identical", if same { "PASS" } else { "FAIL" }));
    // written to the raw handle so the lines show even when test output is captured
    std::io::stderr().write_all(lines.as_bytes()).unwrap();
    assert_eq!(first.criteria.len(), 15);
    assert!(same, "selftest output differs between runs");
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}

#[test]
fn selftest_low_floor_reports_unreachable() {
    let rep = selftest(SelftestConfig { seed: 0, v_floor: 5 }, None).unwrap();
    for c in &rep.criteria {
        let expect = if [2, 4, 8, 15].contains(&c.id) { Status::Pass } else { Status::PrecisionUnreachable };
        assert_eq!(c.status, expect, "criterion {}", c.id);
    }
    assert_eq!(rep.exit_code, 3);
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ffspecial"))
}

fn write_config(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ffspecial-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run_task(task: &str, cfg: &PathBuf, extra: &[&str]) -> (i32, serde_json::Value, Vec<u8>) {
    let out = bin().arg(task).arg("--config").arg(cfg).args(extra).output().unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap();
    (out.status.code().unwrap(), v, out.stdout)
}

fn value<'a>(rep: &'a serde_json::Value, name: &str) -> &'a str {
    rep["values"].as_array().unwrap().iter().find(|v| v["name"] == name).unwrap()["value"].as_str().unwrap()
}

#[test]
fn cli_qpoly_example() {
    let cfg = write_config("qpoly.json", r#"{"schema":"ffspecial.config/1","field":{"p":3},"task":"qpoly","payload":{"u":[1],"n":1}}"#);
    let (code, rep, _) = run_task("qpoly", &cfg, &[]);
    assert_eq!(code, 0);
    assert_eq!(value(&rep, "Q"), "t_1 - t");
    assert_eq!(rep["tool"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(rep["config"]["payload"]["n"], 1);
}

#[test]
fn cli_powersum_example() {
    let cfg = write_config(
        "powersum.json",
        r#"{"schema":"ffspecial.config/1","field":{"p":2},"task":"powersum","payload":{"u":[],"n":1,"d":0}}"#,
    );
    let (code, rep, _) = run_task("powersum", &cfg, &[]);
    assert_eq!(code, 0);
    assert_eq!(value(&rep, "S"), "1");
}

#[test]
fn cli_polylog_expression_example() {
    let cfg = write_config(
        "thm11.json",
        r#"{"schema":"ffspecial.config/1","field":{"p":2},"task":"thm11","payload":{"array":[{"u":[1],"s":1}]}}"#,
    );
    let (code, rep, _) = run_task("thm11", &cfg, &["--floor", "30"]);
    assert_eq!(code, 0);
    let check = &rep["checks"][0];
    assert_eq!(check["pass"], true);
    let res = check["residual"].as_str().unwrap();
    let num: i64 = res.trim_start_matches("<=").parse().unwrap_or(i64::MIN);
    assert!(res == "-inf" || num <= -30, "{res}");
}

#[test]
fn cli_same_seed_same_bytes() {
    let cfg = write_config(
        "gc.json",
        r#"{"schema":"ffspecial.config/1","field":{"p":2},"precision":{"v_floor":20},"task":"gc","payload":{"array":[{"u":[1],"s":1}],"samples":3}}"#,
    );
    let (_, _, a) = run_task("gc", &cfg, &["--seed", "7"]);
    let (_, _, b) = run_task("gc", &cfg, &["--seed", "7"]);
    assert_eq!(a, b);
    let a = bin().args(["selftest", "--seed", "5"]).output().unwrap().stdout;
    let b = bin().args(["selftest", "--seed", "5"]).output().unwrap().stdout;
    assert_eq!(a, b);
}

#[test]
fn cli_selftest_low_floor() {
    let out = bin().args(["selftest", "--floor", "5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let rep: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rep["criteria"][0]["status"], "precision_unreachable");
}

#[test]
fn cli_config_errors() {
    let cfg = write_config("mismatch.json", r#"{"schema":"ffspecial.config/1","field":{"p":3},"task":"qpoly","payload":{"u":[1],"n":1}}"#);
    assert_eq!(run_task("zeta", &cfg, &[]).0, 2);
    let missing = write_config("missing.json", r#"{"schema":"ffspecial.config/1","field":{"p":2},"task":"powersum","payload":{"u":[]}}"#);
    assert_eq!(run_task("powersum", &missing, &[]).0, 2);
    let out = bin().args(["qpoly"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
