use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn normcensus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_normcensus")).args(args).output().expect("run normcensus")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn built(p: u64, q: u64) -> PathBuf {
    let path = tmp(&format!("T_{p}_{q}.tri"));
    let o = normcensus(&["lens-build", "-p", &p.to_string(), "-q", &q.to_string(), "-o", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn lens_build_to_stdout_parses_back() {
    let o = normcensus(&["lens-build", "-p", "7", "-q", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("# T(7,2) S=5 tets=2 word=rrl\n"));
    let path = tmp("stdout_7_2.tri");
    std::fs::write(&path, &text).unwrap();
    let inv = normcensus(&["invariant", path.to_str().unwrap()]);
    assert_eq!(stdout(&inv), "t = 1+e\nvertices = 1\nchi = 0\nkind = closed\ndegree_one_face = false\n");
}

#[test]
fn lens_build_rejects_bad_parameters() {
    for (p, q) in [("6", "2"), ("7", "7"), ("3", "1")] {
        let o = normcensus(&["lens-build", "-p", p, "-q", q]);
        assert_eq!(o.status.code(), Some(2), "p={p} q={q}");
    }
}

#[test]
fn invariant_json_for_smallest_lens_space() {
    let path = built(5, 2);
    let o = normcensus(&["--format", "json", "invariant", path.to_str().unwrap()]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["t"], "0");
    assert_eq!(v["vertices"], 1);
    assert_eq!(v["kind"], "closed");
}

#[test]
fn surfaces_filters() {
    let path = built(8, 3);
    let all: Vec<Value> =
        serde_json::from_slice(&normcensus(&["--format", "json", "surfaces", path.to_str().unwrap()]).stdout).unwrap();
    let nontrivial: Vec<Value> = serde_json::from_slice(
        &normcensus(&["--format", "json", "surfaces", path.to_str().unwrap(), "--nontrivial-only"]).stdout,
    )
    .unwrap();
    assert!(!nontrivial.is_empty());
    assert!(nontrivial.len() < all.len());
    assert!(nontrivial.iter().all(|r| r["trivial"] == false));
    let high: Vec<Value> = serde_json::from_slice(
        &normcensus(&["--format", "json", "surfaces", path.to_str().unwrap(), "--chi-min", "1"]).stdout,
    )
    .unwrap();
    assert!(high.iter().all(|r| r["chi"].as_i64().unwrap() >= 1));
    let tsv = stdout(&normcensus(&["surfaces", path.to_str().unwrap(), "--connected-only"]));
    assert!(tsv.starts_with("coords\tchi\torientable\tconnected\tclassification\ttrivial\tmax_edge_weight\tprovenance\n"));
}

#[test]
fn subpolyhedra_table() {
    let path = built(7, 2);
    let text = stdout(&normcensus(&["subpolyhedra", path.to_str().unwrap()]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "mask\tv_q\tchi\tis_surface");
    assert_eq!(lines[1], "0x0\t0\t0\ttrue");
    assert!(lines.len() > 2);
}

#[test]
fn pachner_round_trip_keeps_invariant() {
    let path = built(8, 3);
    let moved = normcensus(&["pachner", path.to_str().unwrap(), "--move", "23:1"]);
    assert!(moved.status.success(), "{}", String::from_utf8_lossy(&moved.stderr));
    let moved_path = tmp("T_8_3_moved.tri");
    std::fs::write(&moved_path, moved.stdout).unwrap();
    let before = stdout(&normcensus(&["invariant", path.to_str().unwrap()]));
    let after = stdout(&normcensus(&["invariant", moved_path.to_str().unwrap()]));
    assert_eq!(before.lines().next(), after.lines().next());
}

#[test]
fn pachner_usage_errors() {
    let path = built(7, 2);
    assert_eq!(normcensus(&["pachner", path.to_str().unwrap(), "--move", "99"]).status.code(), Some(2));
    assert_eq!(normcensus(&["pachner", path.to_str().unwrap(), "--move", "44:0"]).status.code(), Some(2));
}

#[test]
fn parse_errors_exit_two() {
    let path = tmp("broken.tri");
    std::fs::write(&path, "tets: 1\ng 0 0 0 1 0000\n").unwrap();
    let o = normcensus(&["invariant", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn missing_file_exits_one() {
    assert_eq!(normcensus(&["invariant", "/nonexistent/file.tri"]).status.code(), Some(1));
}

#[test]
fn verify_lens_small_range() {
    let o = normcensus(&["verify", "lens", "--pmax", "7"]);
    let text = stdout(&o);
    assert!(text.lines().next().unwrap().starts_with("subject\ttets\t"));
    // T_4_3..T_7_6 are the mirror rows, pinned as failing.
    assert_eq!(o.status.code(), Some(1));
    let fails: Vec<&str> = text.lines().filter(|l| l.ends_with("\tfail")).map(|l| l.split('\t').next().unwrap()).collect();
    assert_eq!(fails, ["T_4_3", "T_5_4", "T_6_5", "T_7_6"]);
    assert_eq!(normcensus(&["verify", "lens", "--pmax", "3"]).status.code(), Some(2));
}

#[test]
fn verify_existence_small_run() {
    let o = normcensus(&["--format", "json", "verify", "existence", "--seeds", "1", "--steps", "3", "--seed", "9"]);
    assert!(o.status.success());
    let rows: Vec<Value> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows.len(), 4 * 4);
    assert!(rows.iter().all(|r| r["seed"] == 9));
}

#[test]
fn face_budget_exit_code() {
    let path = built(8, 3);
    let o = Command::new(env!("CARGO_BIN_EXE_normcensus"))
        .env("SPINE_FACE_BUDGET", "1")
        .args(["subpolyhedra", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}
