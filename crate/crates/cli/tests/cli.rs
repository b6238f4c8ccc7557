use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn scenario_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(format!("{name}.json"))
}

fn scenario_json(name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(scenario_path(name)).unwrap()).unwrap()
}

fn write_tmp(file: &str, contents: &str) -> PathBuf {
    let path = Path::new(env!("CARGO_TARGET_TMPDIR")).join(file);
    std::fs::write(&path, contents).unwrap();
    path
}

fn chowsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chowsym")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn bundled_scenarios_validate() {
    for name in ["roundtrip_random", "genus2", "elliptic", "two_row"] {
        let o = chowsym(&["validate", scenario_path(name).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stderr(&o));
        assert!(stdout(&o).contains("valid"));
    }
}

#[test]
fn wrong_trace_table_names_the_levels_and_generator() {
    let mut sc = scenario_json("two_row");
    // Tr_{2/1} sends the free generator to 3 instead of 2
    sc["ab_model"]["maps"][0]["tr"] = json!([[0, 3]]);
    let path = write_tmp("bad_trace.json", &sc.to_string());
    let o = chowsym(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("n = 2, m = 1"), "{err}");
    assert!(err.contains("generator"), "{err}");
    // run refuses too, before any check executes
    let o = chowsym(&["run", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).is_empty());
}

#[test]
fn syntax_errors_carry_a_location() {
    let path = write_tmp("broken.json", "{\n  \"curves\": [\n    {\"name\": \"C\",, }\n  ]\n}\n");
    let o = chowsym(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(":3:"), "{}", stderr(&o));
}

#[test]
fn unknown_keys_are_rejected() {
    let mut sc = scenario_json("elliptic");
    sc["checks"] = json!([{ "check": "no_such_check" }]);
    let path = write_tmp("unknown_check.json", &sc.to_string());
    assert_eq!(chowsym(&["validate", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn empty_check_list_passes() {
    let mut sc = scenario_json("elliptic");
    sc["checks"] = json!([]);
    let path = write_tmp("no_checks.json", &sc.to_string());
    let o = chowsym(&["run", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 checks"), "{}", stdout(&o));
}

#[test]
fn failing_check_exits_one_with_a_witness() {
    let mut sc = scenario_json("two_row");
    sc["checks"] = json!([{ "check": "phi", "input": "point_difference", "r": 1, "expect": "{(w,0)}" }]);
    let path = write_tmp("wrong_phi.json", &sc.to_string());
    let report = Path::new(env!("CARGO_TARGET_TMPDIR")).join("wrong_phi.report.json");
    let o = chowsym(&["--report", report.to_str().unwrap(), "run", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let rep: Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(rep["counts"]["fail"], 1);
    assert_eq!(rep["checks"][0]["status"], "fail");
    assert!(rep["checks"][0]["witness"].as_str().unwrap().contains("(y,0)"));
}

#[test]
fn reports_are_byte_identical() {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR"));
    for name in ["two_row", "genus2", "elliptic"] {
        let runs: Vec<Vec<u8>> = (0..2)
            .map(|i| {
                let report = dir.join(format!("{name}.{i}.json"));
                let o = chowsym(&["--quiet", "--seed", "7", "--report", report.to_str().unwrap(), "run", name]);
                assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
                std::fs::read(report).unwrap()
            })
            .collect();
        assert_eq!(runs[0], runs[1], "{name}");
    }
}

#[test]
fn seed_changes_random_suites_only_through_the_seed_field() {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR"));
    let read = |seed: &str| {
        let report = dir.join(format!("elliptic.seed{seed}.json"));
        let o = chowsym(&["--quiet", "--seed", seed, "--report", report.to_str().unwrap(), "run", "elliptic"]);
        assert_eq!(o.status.code(), Some(0));
        serde_json::from_str::<Value>(&std::fs::read_to_string(report).unwrap()).unwrap()
    };
    let (a, b) = (read("1"), read("2"));
    assert_eq!(a["seed"], 1);
    assert_eq!(b["seed"], 2);
    assert_eq!(a["counts"], b["counts"]);
}

#[test]
fn normalize_prints_the_normal_form() {
    let o = chowsym(&["normalize", "{(y1,a_y2),(0,a_y3)} + {(0,a_y3),(y1,a_y2)}", "--scenario", "genus2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("normal form: 2{"), "{out}");
    let bad = chowsym(&["normalize", "{(y1,nope)}", "--scenario", "genus2"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn subcommands_run_the_bundled_suites() {
    for args in [
        vec!["genus2"],
        vec!["--cases", "5", "roundtrip", "--r", "3"],
        vec!["--cases", "5", "psi", "--r", "2"],
        vec!["psi", "--r", "2", "--scenario", "two_row", "--input", "rational"],
        vec!["phi", "--r", "1", "--scenario", "two_row", "--input", "point_difference"],
        vec!["--cases", "5", "vanish", "--r", "3", "--g", "1"],
    ] {
        let o = chowsym(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}{}", stdout(&o), stderr(&o));
    }
}

#[test]
fn genus2_reports_the_cited_step() {
    let o = chowsym(&["genus2"]);
    let out = stdout(&o);
    assert!(out.contains("[axiom-cited]"), "{out}");
    assert!(!out.contains("FAIL"), "{out}");
}

#[test]
fn vanish_requires_r_above_d_plus_g() {
    let o = chowsym(&["vanish", "--r", "2", "--g", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("r > d + g"));
    assert_eq!(chowsym(&["vanish", "--r", "4", "--g", "2"]).status.code(), Some(2));
}

#[test]
fn psi_rejects_a_rank_mismatch() {
    let o = chowsym(&["psi", "--r", "3", "--scenario", "two_row", "--input", "rational"]);
    assert_eq!(o.status.code(), Some(2));
}
