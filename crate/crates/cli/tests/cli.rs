use std::io::Write;
use std::process::Command;

use serde_json::Value;
use stratafix::lp::{infinite_valued_model, parse_program};
use stratafix::TruthValue;
use stratafix_cli::run;

const EXAMPLE: &str = "p :- not q.\nq :- not r.\ns :- p.\ns :- not s.\n";

fn file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut full = vec!["stratafix"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn on_file(cmd: &str, text: &str, extra: &[&str]) -> (i32, String, String) {
    let f = file(text);
    let path = f.path().to_str().unwrap().to_string();
    let mut args = vec![cmd, path.as_str()];
    args.extend_from_slice(extra);
    call(&args)
}

#[test]
fn solve_example_json() {
    let (code, out, _) = on_file("solve", EXAMPLE, &["--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["atoms"]["p"], "F2");
    assert_eq!(v["atoms"]["q"], "T1");
    assert_eq!(v["atoms"]["r"], "F0");
    assert_eq!(v["atoms"]["s"], "0");
    assert_eq!(v["well_founded"]["p"], "false");
    assert_eq!(v["well_founded"]["q"], "true");
    assert_eq!(v["well_founded"]["r"], "false");
    assert_eq!(v["well_founded"]["s"], "undefined");
    assert!(v.get("trace").is_none());
}

#[test]
fn json_values_parse_back_to_the_model() {
    let programs = [EXAMPLE, "p :- not p.", "a :- b, not c.\nb.\nc :- not a.", "x :- not y.\ny :- not z.\nz :- not w.\nw."];
    for text in programs {
        let (code, out, _) = on_file("solve", text, &["--json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        let program = parse_program(text).unwrap();
        let model = infinite_valued_model(&program, None).unwrap().model;
        for (atom, expected) in program.atoms().iter().zip(model.values()) {
            let parsed: TruthValue = v["atoms"][atom].as_str().unwrap().parse().unwrap();
            assert_eq!(parsed, *expected, "{atom} in {text:?}");
        }
    }
}

#[test]
fn trace_lists_every_stage() {
    let (code, out, _) = on_file("solve", EXAMPLE, &["--json", "--trace"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let stages = v["trace"].as_array().unwrap();
    assert_eq!(stages.len(), v["kappa"].as_u64().unwrap() as usize);
    assert_eq!(stages.last().unwrap()["value"], v["atoms"]);
    let (_, text, _) = on_file("solve", EXAMPLE, &["--trace"]);
    assert!(text.contains("stage 0: {p: F0, q: F0, r: F0, s: F0}"));
}

#[test]
fn cross_check_agrees() {
    let (code, out, _) = on_file("solve", EXAMPLE, &["--cross-check"]);
    assert_eq!(code, 0);
    assert!(out.contains("cross-check: agrees"));
    let (code, out, _) = on_file("wfs", "p :- not q.\nq :- not p.", &["--cross-check", "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["cross_check"]["agrees"], true);
    assert_eq!(v["well_founded"]["p"], "undefined");
    assert!(v.get("atoms").is_none());
}

#[test]
fn user_errors_exit_2() {
    assert_eq!(on_file("solve", "", &[]).0, 2);
    assert_eq!(on_file("solve", "p :- .", &[]).0, 2);
    assert_eq!(on_file("solve", "p(X) :- not q(X).", &[]).0, 2);
    assert_eq!(call(&["solve", "/nonexistent/program.lp"]).0, 2);
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(on_file("solve", EXAMPLE, &["--kappa", "0"]).0, 2);
    let (code, _, err) = on_file("solve", EXAMPLE, &["--kappa", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("--kappa"), "{err}");
}

#[test]
fn check_axioms_v3_passes() {
    let (code, out, _) = call(&["check-axioms", "V:3"]);
    assert_eq!(code, 0);
    assert_eq!(out.matches(": pass [exhaustive]").count(), 8, "{out}");
}

#[test]
fn check_axioms_nonstandard_product_fails_axiom_5() {
    let (code, out, _) = call(&["check-axioms", "NSP:chain4-diamond4:2", "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let axioms = v["axioms"].as_array().unwrap();
    for a in axioms {
        let n = a["axiom"].as_u64().unwrap();
        assert_eq!(a["passed"], n != 5 && n < 6, "axiom {n}");
    }
    let five = axioms.iter().find(|a| a["axiom"] == 5).unwrap();
    assert!(five["witness"].as_str().unwrap().contains("(0,a)"));
}

#[test]
fn check_axioms_rejects_bad_models() {
    assert_eq!(call(&["check-axioms", "V:0"]).0, 2);
    assert_eq!(call(&["check-axioms", "W:3"]).0, 2);
    assert_eq!(call(&["check-axioms", "V:2", "--exhaustive-limit", "40"]).0, 2);
}

#[test]
fn check_axioms_sampled_regime_is_reported() {
    let (code, out, _) = call(&["check-axioms", "VZ:2:2", "--exhaustive-limit", "10", "--samples", "50", "--seed", "7"]);
    assert_eq!(code, 0);
    assert!(out.contains("sampled (50 instances, seed 7)"), "{out}");
}

#[test]
fn verify_small_programs() {
    let (code, out, _) = on_file("verify", "p :- not p.", &[]);
    assert_eq!(code, 0);
    assert!(out.contains("verified: {p: 0}"));
    assert!(out.contains("pre-fixed point check: passed"));
    let (code, out, _) = on_file("verify", EXAMPLE, &["--kappa", "4", "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verified"], true);
    assert_eq!(v["fixed_points"], 1);
    assert_eq!(v["interpretations"], 6561);
}

#[test]
fn verify_refuses_large_programs() {
    let text: String = (0..20).map(|k| format!("a{k} :- not a{}.\n", (k + 1) % 20)).collect();
    let (code, _, err) = on_file("verify", &text, &[]);
    assert_eq!(code, 2);
    assert!(err.contains("above the limit"), "{err}");
}

#[test]
fn output_is_deterministic_across_job_counts() {
    let f = file(EXAMPLE);
    let path = f.path().to_str().unwrap();
    let a = call(&["--jobs", "1", "verify", path, "--json"]);
    let b = call(&["--jobs", "3", "verify", path, "--json"]);
    let c = call(&["verify", path, "--json"]);
    assert_eq!(a, b);
    assert_eq!(a, c);
    let a = call(&["check-axioms", "VZ:2:2", "--exhaustive-limit", "8", "--samples", "30", "--seed", "3", "--jobs", "1"]);
    let b = call(&["check-axioms", "VZ:2:2", "--exhaustive-limit", "8", "--samples", "30", "--seed", "3", "--jobs", "4"]);
    assert_eq!(a, b);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_stratafix");
    let f = file(EXAMPLE);
    let ok = Command::new(bin).args(["solve", f.path().to_str().unwrap()]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("s = 0"));
    let empty = file("");
    let bad = Command::new(bin).args(["solve", empty.path().to_str().unwrap()]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("error:"));
}
