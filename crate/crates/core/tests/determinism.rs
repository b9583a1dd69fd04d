use std::process::Command;

use ur_equiv::explorer::{map_region, minimize_spin_variance_sum, scan_violations};
use ur_equiv::entropy::RenyiIndex;
use ur_equiv::observables::{axis_at_angle, qubit_observable};
use ur_equiv::relations::RelationId;

fn run_to_file(args: &[&str], threads: &str, path: &std::path::Path) -> Vec<u8> {
    let status = Command::new(env!("CARGO_BIN_EXE_ur-equiv"))
        .args(args)
        .arg("--out")
        .arg(path)
        .env("UR_EQUIV_THREADS", threads)
        .status()
        .unwrap();
    assert!(status.success());
    std::fs::read(path).unwrap()
}

#[test]
fn region_csv_is_byte_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["region", "--theta", "45", "--n", "3000", "--seed", "11"];
    let a = run_to_file(&args, "1", &dir.path().join("a.csv"));
    let b = run_to_file(&args, "4", &dir.path().join("b.csv"));
    let c = run_to_file(&args, "0", &dir.path().join("c.csv"));
    assert_eq!(a, b);
    assert_eq!(a, c);
}

fn without_wall_time(bytes: &[u8]) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_slice(bytes).unwrap();
    v.as_object_mut().unwrap().remove("wall_ms");
    v
}

#[test]
fn check_json_matches_except_wall_time() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["check", "--n", "300", "--seed", "5"];
    let a = run_to_file(&args, "1", &dir.path().join("a.json"));
    let b = run_to_file(&args, "3", &dir.path().join("b.json"));
    assert_eq!(without_wall_time(&a), without_wall_time(&b));
    let csv_args = ["check", "--n", "300", "--seed", "5", "--format", "csv"];
    let a = run_to_file(&csv_args, "1", &dir.path().join("a.csv"));
    let b = run_to_file(&csv_args, "2", &dir.path().join("b.csv"));
    assert_eq!(a, b);
}

#[test]
fn library_results_repeat_bit_for_bit() {
    let a = qubit_observable(axis_at_angle(0.0)).unwrap();
    let b = qubit_observable(axis_at_angle(30.0)).unwrap();
    let r1 = map_region(&a, &b, 500, 3, RenyiIndex::SHANNON).unwrap();
    let r2 = map_region(&a, &b, 500, 3, RenyiIndex::SHANNON).unwrap();
    assert_eq!(r1, r2);
    assert_ne!(r1.points, map_region(&a, &b, 500, 4, RenyiIndex::SHANNON).unwrap().points);

    assert_eq!(
        minimize_spin_variance_sum(3, 8, 2).unwrap(),
        minimize_spin_variance_sum(3, 8, 2).unwrap()
    );
    assert_eq!(
        scan_violations(&RelationId::ALL, 100, 9).unwrap(),
        scan_violations(&RelationId::ALL, 100, 9).unwrap()
    );
}
