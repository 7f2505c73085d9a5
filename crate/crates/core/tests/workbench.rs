use benchaudit::workbench::io::{leaderboard_to_string, read_json, write_json};
use benchaudit::workbench::{
    audit, parse_leaderboard, subset_analysis, AuditOptions, AuditReport, SensitivityMethod,
};
use benchaudit::{generate_random, kendall_tau, mrc, BenchmarkKind, ScoreMatrix};

#[test]
fn report_survives_json_round_trip() {
    let s = generate_random(8, 4, 11).unwrap();
    let mut options = AuditOptions::new(SensitivityMethod::cardinal());
    if let SensitivityMethod::Cardinal { attack, .. } = &mut options.method {
        attack.iterations = 40;
    }
    let report = audit("rt", &s, &options).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    write_json(&report, &path).unwrap();
    let back: AuditReport = read_json(&path).unwrap();
    assert_eq!(back, report);
}

#[test]
fn leaderboard_round_trip_keeps_missing_cells() {
    let text = "model,a,b\nx,0.1,\ny,0.30000000000000004,2e-9\n";
    let s = parse_leaderboard(text).unwrap();
    let again = parse_leaderboard(&leaderboard_to_string(&s)).unwrap();
    assert_eq!(again, s);
    assert_eq!(again.get(0, 1), None);
}

/// Every subset, aggregated from a freshly built sub-benchmark.
fn enumerate(s: &ScoreMatrix, kind: BenchmarkKind, k: usize) -> (f64, f64) {
    let full = kind.aggregate(s).unwrap();
    let n = s.tasks();
    let mut best = (f64::INFINITY, f64::INFINITY);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let tasks: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
        let r = kind.aggregate(&s.select_tasks(&tasks).unwrap()).unwrap();
        best.0 = best.0.min(kendall_tau(&full, &r).unwrap());
        best.1 = best.1.min(mrc(&full, &r).unwrap());
    }
    best
}

#[test]
fn exhaustive_subset_levels_match_enumeration() {
    for seed in 0..5 {
        let s = generate_random(5, 4, seed).unwrap();
        for kind in [BenchmarkKind::Cardinal, BenchmarkKind::Ordinal] {
            let a = subset_analysis(&s, kind, 4, 10, 0).unwrap();
            for level in &a.levels {
                assert!(level.exhaustive);
                let (tau, m) = enumerate(&s, kind, level.size);
                assert_eq!(
                    (level.min_tau, level.min_mrc),
                    (tau, m),
                    "{kind} k={}",
                    level.size
                );
            }
        }
    }
}
