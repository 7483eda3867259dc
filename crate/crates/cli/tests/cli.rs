use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_superyang"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("superyang-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json_of(args: &[&str], name: &str) -> (i32, String) {
    let p = scratch(name);
    let mut all: Vec<&str> = args.to_vec();
    let ps = p.to_str().unwrap().to_owned();
    all.extend(["--json", &ps]);
    let out = run(&all);
    (out.status.code().unwrap(), std::fs::read_to_string(&p).unwrap())
}

const ANTI: [&str; 13] = [
    "relations", "--m", "1", "--n", "1", "--a", "3", "--b", "5", "--order", "4", "--only", "XplusXminus-anticommutator",
];

#[test]
fn matches_golden_report() {
    let (code, text) = json_of(&ANTI, "golden.json");
    assert_eq!(code, 1);
    assert_eq!(text, include_str!("golden/anticommutator_gl11.json"));
}

#[test]
fn corrected_sign_passes_the_same_instance() {
    let mut args = ANTI.to_vec();
    args.extend(["--delta-sign", "corrected"]);
    let (code, text) = json_of(&args, "corrected.json");
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["summary"]["pass"], 3);
    assert_eq!(v["reports"][0]["params"]["delta_sign"], "corrected");
}

#[test]
fn reports_are_byte_identical_across_runs_and_thread_counts() {
    let args = ["all", "--m", "1", "--n", "1", "--points", "3,-7", "--order", "4"];
    let (c1, a) = json_of(&args, "det1.json");
    let p = scratch("det2.json");
    let out = bin()
        .args(args)
        .args(["--json", p.to_str().unwrap()])
        .env("SUPERYANG_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(c1, out.status.code().unwrap());
    assert_eq!(a, std::fs::read_to_string(p).unwrap());
    assert!(!a.contains("runtime"), "timings must be opt-in");
}

#[test]
fn timings_are_opt_in() {
    let (_, text) = json_of(&["gauss", "--m", "1", "--n", "1", "--order", "3", "--timings"], "t.json");
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(v["runtime_ms"].is_u64());
    assert!(v["reports"][0]["runtime_ms"].is_u64());
}

#[test]
fn exit_codes() {
    let ok = run(&["ybe-check", "--m", "1", "--n", "1", "--samples", "3"]);
    assert_eq!(ok.status.code(), Some(0));
    let usage = [
        vec!["relations", "--m", "0", "--n", "1"],
        vec!["relations", "--m", "1", "--n", "1", "--only", "nonsense"],
        vec!["rll-check", "--m", "1", "--n", "1", "--a", "2", "--b", "2"],
        vec!["gauss", "--m", "1", "--n", "1", "--hbar", "0"],
        vec!["gauss", "--m", "1", "--n", "1", "--hbar", "1/0"],
        vec!["gauss", "--m", "1", "--n", "1", "--order", "0"],
        vec!["hopf-check", "--m", "1", "--n", "1", "--delta-sign", "maybe"],
        vec!["all", "--m", "1", "--n", "1", "--suites", "ybe,bogus"],
        vec!["ybe-check", "--m", "1"],
    ];
    for args in usage {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
    let bad_threads = bin().args(["gauss", "--m", "1", "--n", "1"]).env("SUPERYANG_THREADS", "0").output().unwrap();
    assert_eq!(bad_threads.status.code(), Some(2));
}

#[test]
fn pole_at_zero_is_a_usage_error() {
    // L-(u) expands at u = 0, so a point with a - 2ħ = 0 is rejected.
    let out = run(&["gauss", "--m", "1", "--n", "1", "--a", "1", "--hbar", "1/2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("superyang:"));
}

#[test]
fn ybe_only_needs_one_dimension() {
    assert_eq!(run(&["ybe-check", "--m", "0", "--n", "1"]).status.code(), Some(0));
}

#[test]
fn gauss_dump_carries_factors() {
    let (code, text) = json_of(&["gauss", "--m", "2", "--n", "1", "--order", "2", "--dump"], "dump.json");
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["dumps"][0]["module"], "a=3");
    assert_eq!(v["dumps"][0]["gauss"].as_array().unwrap().len(), 2);
}

#[test]
fn json_to_stdout() {
    let out = run(&["gauss", "--m", "1", "--n", "1", "--order", "2", "--json", "-"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
}
