use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use benchaudit::workbench::io::read_json;
use benchaudit::workbench::{load_leaderboard, AuditReport, SubsetAnalysis, TradeoffFit};
use benchaudit::BenchmarkKind;

fn benchaudit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_benchaudit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

const NINE_TASKS: &str = "\
model,t1,t2,t3,t4,t5,t6,t7,t8,t9
L1,4,4,4,4,1,1,1,3,3
L2,3,3,3,3,4,4,4,2,2
L3,1,1,1,1,2,2,2,4,4
L4,2,2,2,2,3,3,3,1,1
";

#[test]
fn generate_then_audit_constant() {
    let dir = tempfile::tempdir().unwrap();
    let board = dir.path().join("constant.csv");
    let report = dir.path().join("constant.json");
    let out = benchaudit(&[
        "generate",
        "constant",
        "--models",
        "12",
        "--tasks",
        "6",
        "--seed",
        "3",
        "--out",
        path(&board),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(load_leaderboard(&board).unwrap().models(), 12);

    let out = benchaudit(&[
        "audit",
        "--kind",
        "cardinal",
        "--input",
        path(&board),
        "--out",
        path(&report),
        "--iters",
        "50",
        "--epsilon",
        "0.01",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r: AuditReport = read_json(&report).unwrap();
    assert_eq!(r.benchmark_name, "constant");
    assert_eq!((r.m, r.n, r.kind), (12, 6, BenchmarkKind::Cardinal));
    assert!(r.diversity.abs() < 1e-12);
    assert_eq!((r.sensitivity_tau, r.sensitivity_mrc), (0.0, 0.0));
    assert_eq!(r.config.epsilon, Some(0.01));
}

#[test]
fn ordinal_oracle_with_named_split() {
    let dir = tempfile::tempdir().unwrap();
    let board = dir.path().join("nine.csv");
    let report = dir.path().join("nine.json");
    fs::write(&board, NINE_TASKS).unwrap();
    let out = benchaudit(&[
        "oracle",
        "ordinal",
        "--input",
        path(&board),
        "--out",
        path(&report),
        "--kept",
        "L1,L2,L3",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r: AuditReport = read_json(&report).unwrap();
    assert!((r.sensitivity_tau - 1.0 / 3.0).abs() < 1e-12);
    assert_eq!(r.config.kept_models.unwrap(), vec!["L1", "L2", "L3"]);
}

#[test]
fn subset_analysis_and_tradeoff() {
    let dir = tempfile::tempdir().unwrap();
    let board = dir.path().join("random.csv");
    benchaudit(&[
        "generate",
        "random",
        "--models",
        "10",
        "--tasks",
        "5",
        "--seed",
        "1",
        "--out",
        path(&board),
    ]);
    let analysis = dir.path().join("subsets.json");
    let out = benchaudit(&[
        "subset-analysis",
        "--input",
        path(&board),
        "--max-k",
        "5",
        "--samples",
        "20",
        "--out",
        path(&analysis),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let a: SubsetAnalysis = read_json(&analysis).unwrap();
    assert_eq!(a.levels.len(), 5);
    assert_eq!(a.levels[4].min_tau, 0.0);

    let mut reports = Vec::new();
    for kind in ["cardinal", "ordinal"] {
        let report = dir.path().join(format!("{kind}.json"));
        let out = benchaudit(&[
            "audit",
            "--kind",
            kind,
            "--input",
            path(&board),
            "--out",
            path(&report),
            "--iters",
            "30",
            "--restarts",
            "2",
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        reports.push(report);
    }
    let fit = dir.path().join("fit.json");
    let points = dir.path().join("points.csv");
    let out = benchaudit(&[
        "tradeoff",
        "--inputs",
        path(&reports[0]),
        path(&reports[1]),
        "--csv",
        path(&points),
        "--out",
        path(&fit),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let f: TradeoffFit = read_json(&fit).unwrap();
    assert_eq!(f.points, 2);
    assert_eq!(fs::read_to_string(&points).unwrap().lines().count(), 3);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    let out_path = dir.path().join("out.json");
    fs::write(&bad, "model,a,b\nx,1,oops\n").unwrap();
    let out = benchaudit(&[
        "audit",
        "--kind",
        "cardinal",
        "--input",
        path(&bad),
        "--out",
        path(&out_path),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 2"));

    let gap = dir.path().join("gap.csv");
    fs::write(&gap, "model,a,b\nx,1,\ny,0.5,0.2\nz,0.1,0.9\n").unwrap();
    let out = benchaudit(&[
        "audit",
        "--kind",
        "ordinal",
        "--input",
        path(&gap),
        "--out",
        path(&out_path),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out_path.exists());

    let wide = dir.path().join("wide.csv");
    benchaudit(&[
        "generate",
        "random",
        "--models",
        "30",
        "--tasks",
        "3",
        "--seed",
        "0",
        "--out",
        path(&wide),
    ]);
    let out = benchaudit(&[
        "oracle",
        "ordinal",
        "--input",
        path(&wide),
        "--out",
        path(&out_path),
        "--split-fraction",
        "0.1",
    ]);
    assert_eq!(out.status.code(), Some(4));

    let out = benchaudit(&[
        "audit",
        "--kind",
        "cardinal",
        "--input",
        "/nonexistent/x.csv",
        "--out",
        path(&out_path),
    ]);
    assert_eq!(out.status.code(), Some(1));
}
