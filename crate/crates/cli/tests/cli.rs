use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    root.join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tambara")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn enumerate_c4_json_has_five_entries() {
    let o = run(&["ts", "enumerate", "C4", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["systems"].as_array().unwrap().len(), 5);
    assert_eq!(v["count"], 5);
}

#[test]
fn figure_one_validation() {
    assert_eq!(run(&["ts", "validate", &fixture("fig1-left.ts")]).status.code(), Some(0));
    let o = run(&["ts", "validate", &fixture("fig1-right.ts"), "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let violations = v["violations"].as_array().unwrap();
    assert_eq!(violations.len(), 1);
    assert_eq!(violations[0]["axiom"], "intersection");
    assert_eq!(violations[0]["pair"], serde_json::json!(["e", "C2"]));
}

#[test]
fn figure_two_check_fails_with_witness() {
    let (tm, ta) = (fixture("fig2-tm.ts"), fixture("fig2-ta.ts"));
    let o = run(&["compat", "check", "C2xC2", &tm, &ta]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness: A = C2xC2, B = C2#2, C = C2#1"), "{}", stdout(&o));

    let o = run(&["compat", "check", "C2xC2", &tm, &ta, "--oracle", "--expect", "incompatible", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["combinatorial"]["verdict"], "incompatible");
    assert_eq!(v["oracle"]["verdict"], "incompatible");
    assert_eq!(v["oracle"]["failing"]["recheck"], true);
}

#[test]
fn figure_two_dot() {
    let o = run(&["dot", &fixture("fig2-tm.ts"), &fixture("fig2-ta.ts")]);
    assert!(o.status.success());
    let text = stdout(&o);
    let arrows: Vec<&str> = text.lines().filter(|l| l.contains("->")).collect();
    assert_eq!(arrows.iter().filter(|l| !l.contains("dashed")).count(), 3);
    assert_eq!(arrows.iter().filter(|l| l.contains("dashed")).count(), 1);
}

#[test]
fn exit_codes() {
    // unknown group
    assert_eq!(run(&["lattice", "Z7x"]).status.code(), Some(2));
    // norm along an arrow the multiplicative system lacks
    let left = fixture("fig1-left.ts");
    let full = fixture("c4-complete.ts");
    assert_eq!(run(&["burnside", "eval", "C4", &left, &full, "norm(C2,C4,[C2/C2])"]).status.code(), Some(2));
    // unreadable file, then an expression without a level
    assert_eq!(run(&["burnside", "eval", "C4", &fixture("missing.ts"), &full, "[C4/e]"]).status.code(), Some(2));
    assert_eq!(run(&["burnside", "eval", "C4", &full, &full, "1"]).status.code(), Some(2));
    // resource gate
    assert_eq!(run(&["--max-subgroups", "4", "ts", "enumerate", "C2xC2"]).status.code(), Some(3));
    // incompatible pair refused by the context
    let (tm, ta) = (fixture("fig2-tm.ts"), fixture("fig2-ta.ts"));
    assert_eq!(run(&["burnside", "eval", "C2xC2", &tm, &ta, "1"]).status.code(), Some(1));
}

#[test]
fn burnside_norm_formula() {
    let full = fixture("c4-complete.ts");
    let o = run(&["burnside", "eval", "C4", &full, &full, "norm(e,C2,3*[e/e])", "--json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["level"], "C2");
    assert_eq!(v["coeffs"], serde_json::json!([["C2", 3], ["e", 3]]));
}

#[test]
fn coinduce_reports_big_counts() {
    let o = run(&["coinduce", "C4", "e", "C4", "100*[e/e]", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    // 100^4 points: 100 fixed, (100^2-100)/2 with stabilizer C2, the rest free
    assert_eq!(v["size"], 100_000_000u64);
    let profile = v["profile"].as_array().unwrap();
    assert_eq!(profile[0], serde_json::json!(["C2", 4950]));
    assert_eq!(profile[1], serde_json::json!(["C4", 100]));
    assert_eq!(profile[2], serde_json::json!(["e", (100_000_000u64 - 10_000) / 4]));
}

#[test]
fn verify_subcommands() {
    let o = run(&["verify", "equivalence", "S3"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["disagreements"].as_array().unwrap().len(), 0);

    let (left, full) = (fixture("fig1-left.ts"), fixture("c4-complete.ts"));
    let o = run(&["--seed", "7", "verify", "laws", "C4", &left, &full, "--rounds", "10"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn lattice_json() {
    let o = run(&["lattice", "S3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["order"], 6);
    assert_eq!(v["subgroups"].as_array().unwrap().len(), 6);
    assert_eq!(v["classes"].as_array().unwrap().len(), 4);
}
