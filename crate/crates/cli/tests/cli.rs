//! End-to-end runs of the `knapart` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn knapart(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_knapart"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn labels(text: &str) -> Vec<usize> {
    text.lines()
        .map(|l| l.split_whitespace().nth(1).unwrap().parse().unwrap())
        .collect()
}

/// Two unit-weight triangles joined by one light edge.
const TWO_TRIANGLES: &str =
    "6 7 1\n1 2 5\n2 3 5\n1 3 5\n4 5 5\n5 6 5\n4 6 5\n3 4 1\n1\n1\n1\n1\n1\n1\n";

#[test]
fn generate_then_partition_writes_a_feasible_labeling() {
    let dir = tempfile::tempdir().unwrap();
    let out = knapart(
        &["generate", "--n", "40", "--seed", "3", "--out", "g.txt"],
        dir.path(),
    );
    assert!(out.status.success());
    let graph = fs::read_to_string(dir.path().join("g.txt")).unwrap();
    assert!(graph.starts_with("40 "));
    let out = knapart(
        &[
            "partition",
            "g.txt",
            "--capacity",
            "6000",
            "--restarts",
            "2",
            "--out",
            "p.txt",
            "--report",
            "r.json",
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        labels(&fs::read_to_string(dir.path().join("p.txt")).unwrap()).len(),
        40
    );
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["config"]["restarts"], 2);
    assert!(report["forest"]["cut_total"].as_f64().unwrap() >= 0.0);
    assert!(report["forest"]["overflow"]
        .as_array()
        .unwrap()
        .iter()
        .all(|f| f == false));
}

#[test]
fn two_triangles_split_on_the_light_edge() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("g.txt"), TWO_TRIANGLES).unwrap();
    let out = knapart(&["partition", "g.txt", "--capacity", "3"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let l = labels(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(l[0], l[1]);
    assert_eq!(l[1], l[2]);
    assert_eq!(l[3], l[4]);
    assert_eq!(l[4], l[5]);
    assert_ne!(l[0], l[3]);
}

#[test]
fn oracle_matches_the_known_optimum() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("g.txt"), TWO_TRIANGLES).unwrap();
    let out = knapart(&["oracle", "g.txt", "--capacity", "3"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("optimal cut 1 "));
    let out = knapart(&["oracle", "g.txt", "--capacity", "2"], dir.path());
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn improve_lowers_a_bad_partition() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("g.txt"), TWO_TRIANGLES).unwrap();
    fs::write(dir.path().join("p.txt"), "1 1\n2 1\n3 2\n4 1\n5 2\n6 2\n").unwrap();
    let out = knapart(
        &[
            "improve",
            "g.txt",
            "--partition",
            "p.txt",
            "--out",
            "q.txt",
            "--report",
            "r.json",
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["capacity"], serde_json::json!([3]));
    assert_eq!(report["improve"]["cut_after"], 1.0);
    assert!(report["improve"]["cut_before"].as_f64().unwrap() > 1.0);
}

#[test]
fn improve_reports_hyperedge_cuts() {
    let dir = tempfile::tempdir().unwrap();
    // Nets {1,2,3} and {3,4}, net weights 2 and 1.
    fs::write(dir.path().join("h.hgr"), "2 4 1\n2 1 2 3\n1 3 4\n").unwrap();
    fs::write(dir.path().join("p.txt"), "1 1\n2 2\n3 1\n4 2\n").unwrap();
    let out = knapart(
        &[
            "improve",
            "h.hgr",
            "--format",
            "hmetis",
            "--partition",
            "p.txt",
            "--capacity",
            "3",
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("connectivity cut 3 -> "), "{err}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.txt"), "3 x 1\n").unwrap();
    let out = knapart(&["partition", "bad.txt", "--capacity", "3"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));

    // The weight-5 vertex can never fit under 4, but augmentation lets the
    // split proceed, so the result is returned and flagged infeasible.
    fs::write(dir.path().join("heavy.txt"), "2 1 1\n1 2 1\n5\n1\n").unwrap();
    let out = knapart(&["partition", "heavy.txt", "--capacity", "4"], dir.path());
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    // Far too small for 64 rounds of ten-percent growth.
    assert!(
        knapart(&["generate", "--n", "30", "--out", "g.txt"], dir.path())
            .status
            .success()
    );
    let out = knapart(&["partition", "g.txt", "--capacity", "10"], dir.path());
    assert_eq!(out.status.code(), Some(4));

    fs::write(
        dir.path().join("big.txt"),
        "30 0 1\n".to_string() + &"1\n".repeat(30),
    )
    .unwrap();
    let out = knapart(&["oracle", "big.txt", "--capacity", "30"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_writes_runs_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = knapart(
        &[
            "bench",
            "--table",
            "1",
            "--n",
            "100",
            "--repeats",
            "1",
            "--out",
            "runs.csv",
            "--summary",
            "sum.csv",
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let runs = fs::read_to_string(dir.path().join("runs.csv")).unwrap();
    assert!(runs.starts_with("instance,n,edge_prob,capacity,seed,cut,cpu_s,status,iters\n"));
    assert_eq!(runs.lines().count(), 7);
    let summary = fs::read_to_string(dir.path().join("sum.csv")).unwrap();
    assert!(summary.lines().next().unwrap().ends_with("gap_pct"));
    assert_eq!(summary.lines().count(), 7);
}
