//! End-to-end checks of the `skewspec` binary: config parsing, JSON
//! emission, exit codes, determinism, and the witness -> verify round
//! trip through files.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_skewspec"))
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.display().to_string()
}

fn json_of(output: &Output) -> serde_json::Value {
    serde_json::from_slice(&output.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout was not JSON ({e}): {}",
            String::from_utf8_lossy(&output.stdout)
        )
    })
}

const TENT_MAP: &str = "[map]\nnodes = [(0, 0), (1/2, 1), (1, 0)]\n";
const GOLDEN_SFT: &str = "[sft]\nalphabet = 2\nforbidden = 22\n";
const SYSTEM: &str = "\
[system]
alphabet = 2
fibre = [(0, 0), (1/2, 1), (1, 0)]
fibre = [(0, 1), (1/2, 0), (1, 1)]
";
const SEGMENTS: &str = "\
[segments]
segment = |1, 1/3, 3
segment = |2, 2/3, 3
";

#[test]
fn map_check_reports_tent_facts() {
    let dir = tempfile::tempdir().unwrap();
    let map = write(dir.path(), "tent.cfg", TENT_MAP);
    let out = bin().args(["map-check", &map]).output().unwrap();
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["expanding"], true);
    assert_eq!(v["rate"], "2/1");
    assert_eq!(v["surjective"], true);
    assert_eq!(v["mixing"], true);
}

#[test]
fn leo_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let map = write(dir.path(), "tent.cfg", TENT_MAP);
    let out = bin()
        .args(["leo", "--map", &map, "--gamma", "1/2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(json_of(&out)["m"], 4);
}

#[test]
fn sft_info_golden_and_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let golden = write(dir.path(), "golden.cfg", GOLDEN_SFT);
    let out = bin().args(["sft-info", &golden]).output().unwrap();
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["primitive"], true);
    assert_eq!(v["exponent"], 2);

    let cycle = write(
        dir.path(),
        "cycle.cfg",
        "[sft]\nalphabet = 2\nmatrix = 01,10\n",
    );
    let out = bin().args(["sft-info", &cycle]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(json_of(&out)["primitive"], false);
}

#[test]
fn gamma_and_fuzz() {
    let dir = tempfile::tempdir().unwrap();
    let fam = write(
        dir.path(),
        "fam.cfg",
        "[family]\nmap = [(0, 0), (1/2, 1), (1, 0)]\nmap = [(0, 1), (1/2, 0), (1, 1)]\n",
    );
    let out = bin()
        .args(["gamma", "--family", &fam, "--eps", "1/2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["alpha"], "2/1");
    assert_eq!(v["m"], 2);
    assert_eq!(v["gamma"], "1/4");

    let out = bin()
        .args([
            "fuzz", "--family", &fam, "--eps", "1/2", "--trials", "300", "--seed", "11",
            "--word-len", "80",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(json_of(&out)["violations"], 0);
}

#[test]
fn gamma_rejects_rate_one_family_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    // g has a slope of absolute value 1
    let fam = write(
        dir.path(),
        "fam.cfg",
        "[family]\nmap = [(0, 1), (1/4, 1/4), (1/2, 0), (1, 1/2)]\n",
    );
    let out = bin()
        .args(["gamma", "--family", &fam, "--eps", "1/2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_errors_exit_2_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.cfg", "[map]\nnodes [(0,0)]\n");
    let out = bin().args(["map-check", &bad]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "stderr: {err}");
}

#[test]
fn shrink_demo_writes_exact_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("trace.csv");
    let out = bin()
        .args([
            "shrink-demo",
            "--xi",
            "13093/55459",
            "--steps",
            "200",
            "--out",
            csv.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let body = std::fs::read_to_string(&csv).unwrap();
    let mut lines = body.lines();
    assert_eq!(
        lines.next().unwrap(),
        "step,map,interval_lo,interval_hi,length"
    );
    let first = lines.next().unwrap();
    assert!(first.starts_with("1,phi,"), "first row: {first}");
    assert!(first.contains("/"), "rationals must stay exact: {first}");
    assert_eq!(body.lines().count(), 201);
}

#[test]
fn witness_then_verify_roundtrip_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let sys = write(dir.path(), "sys.cfg", SYSTEM);
    let segs = write(dir.path(), "segs.cfg", SEGMENTS);
    let report = dir.path().join("report.json");

    let run = || {
        bin()
            .args([
                "witness",
                "--system",
                &sys,
                "--segments",
                &segs,
                "--eps",
                "1/4",
                "--report",
                report.to_str().unwrap(),
            ])
            .output()
            .unwrap()
    };
    let out1 = run();
    assert!(out1.status.success(), "{}", String::from_utf8_lossy(&out1.stderr));
    let v = json_of(&out1);
    assert_eq!(v["eps"], "1/4");
    assert!(v["audit"]["periodic"].as_bool().unwrap());

    // identical inputs give byte-identical reports
    let saved1 = std::fs::read(&report).unwrap();
    let out2 = run();
    assert_eq!(out1.stdout, out2.stdout);
    assert_eq!(saved1, std::fs::read(&report).unwrap());

    // independent re-audit from the emitted file
    let out = bin()
        .args([
            "verify",
            "--system",
            &sys,
            "--segments",
            &segs,
            "--report",
            report.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(json_of(&out)["passed"], true);

    // the prescribed-gaps variant accepts wider gaps only with longer
    // segments; with the same segments a wrong gap must fail loudly
    let out = bin()
        .args([
            "verify",
            "--system",
            &sys,
            "--segments",
            &segs,
            "--report",
            report.to_str().unwrap(),
            "--gaps",
            "8,9",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn witness_csv_orbit_dump() {
    let dir = tempfile::tempdir().unwrap();
    let sys = write(dir.path(), "sys.cfg", SYSTEM);
    let segs = write(dir.path(), "segs.cfg", SEGMENTS);
    let csv = dir.path().join("orbit.csv");
    let out = bin()
        .args([
            "witness",
            "--system",
            &sys,
            "--segments",
            &segs,
            "--eps",
            "1/2",
            "--csv",
            csv.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let body = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(
        body.lines().next().unwrap(),
        "segment,i,step,segment_x,witness_x,base_dist,fibre_dist,defect"
    );
    // 3 + 3 segment steps
    assert_eq!(body.lines().count(), 7);
}

#[test]
fn explicit_anchor_word_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let sys = write(dir.path(), "sys.cfg", SYSTEM);
    let segs = write(dir.path(), "segs.cfg", "[segments]\nsegment = |1, 1/3, 2\n");
    let out = bin()
        .args([
            "witness", "--system", &sys, "--segments", &segs, "--eps", "1/2", "--anchor", "2",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert_eq!(v["anchor"]["alpha"], "|2");
}
