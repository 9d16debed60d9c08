use std::process::{Command, Output};

use loopwalk::identities::{IdentityReport, PartialSumTable, TailReport};
use loopwalk::montecarlo::SimReport;

fn loopwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loopwalk"))
        .args(args)
        .env_remove("LOOPWALK_ORDER")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn counts_and_denominators() {
    let out = loopwalk(&["count", "--n", "5", "--l", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "6");

    let out = loopwalk(&["count", "--n", "5", "--l", "2", "--initial", "1", "--list"]);
    assert_eq!(stdout(&out).trim(), "l=2: 3  [L5*L1, L4*L1, L3*L1]");

    let out = loopwalk(&["denominator", "--n", "3"]);
    assert_eq!(stdout(&out).trim(), "-L1 -L2 -L3 +L3*L1");
}

#[test]
fn loop_checks_exit_zero() {
    for args in [
        vec!["verify-loop", "--model", "bm", "--loops", "3", "--order", "30"],
        vec!["verify-loop", "--model", "bessel", "--sites", r#"["0","1/2","3/2","2","3"]"#, "--order", "16"],
        vec!["verify-loop", "--model", "bd", "--chain", r#"["1/3","2/5"]"#, "--order", "24"],
    ] {
        let out = loopwalk(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stdout(&out));
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["verify-loop", "--model", "bm"],
        vec!["verify-loop", "--model", "bm", "--sites", r#"["0","2","1"]"#],
        vec!["verify-loop", "--model", "bd", "--sites", r#"["0","1","2"]"#],
        vec!["poly", "--kind", "euler", "--n", "3", "--x", "0.25"],
        vec!["count", "--n", "4", "--nonsense"],
        vec!["tail", "--model", "bm", "--m", "2", "--bracket", "2:3/2"],
        vec!["simulate", "--model", "bd", "--z", "0"],
    ] {
        assert_eq!(loopwalk(&args).status.code(), Some(2), "{args:?}");
    }
    let out = loopwalk(&["umbral", "B ** U"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("combo :="));
}

#[test]
fn mismatches_exit_one() {
    let out = loopwalk(&["umbral", "2*B", "--equals", "B + B", "--order", "6"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("MISMATCH at coefficient 2"));
    let out = loopwalk(&["umbral", "2*B", "--equals", "B + E", "--order", "6"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn identity_reports_round_trip() {
    let out = loopwalk(&["verify-identity", "--model", "bessel", "--m", "3", "--x", "0", "--x", "-2", "--x", "7/5", "--order", "20", "--output", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let reports: Vec<IdentityReport> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(reports.len(), 4);
    assert!(reports.iter().all(|r| r.pass && r.order == 20 && r.m == 3));
    assert_eq!(reports[2].identity, "bessel-egf x=-2");
}

#[test]
fn order_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_loopwalk"))
        .args(["verify-identity", "--model", "bm", "--m", "2", "--output", "json"])
        .env("LOOPWALK_ORDER", "7")
        .output()
        .unwrap();
    let reports: Vec<IdentityReport> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(reports[0].order, 7);
    let out = Command::new(env!("CARGO_BIN_EXE_loopwalk"))
        .args(["denominator", "--n", "2"])
        .env("LOOPWALK_ORDER", "seven")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn partial_tables() {
    let out = loopwalk(&["partial", "--model", "bm", "--m", "3", "--n", "2", "--x", "1", "--k", "5", "--output", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = stdout(&out);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "k,partial_sum,target,abs_error");
    assert_eq!(lines.len(), 7);
    assert!(lines[1].starts_with("0,") && lines[1].contains(",-3/16,"));

    let out = loopwalk(&["partial", "--model", "bessel", "--m", "4", "--n", "1", "--k", "3", "--output", "json"]);
    let table: PartialSumTable = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(table.rows.len(), 4);
    assert!(table.literal_rows.is_none());
}

#[test]
fn tail_report_json() {
    let out = loopwalk(&["tail", "--model", "bm", "--m", "3", "--k", "50", "--order", "6", "--output", "json"]);
    let r: TailReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(r.max_k, 50);
    assert_eq!(r.errors.len(), 7);
}

#[test]
fn simulation_json() {
    let out = loopwalk(&["simulate", "--model", "bd", "--z", "1", "--from", "1", "--to", "2", "--taboo", "0", "--paths", "4000", "--seed", "5", "--output", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r: SimReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(r.target, 0.5);
    assert_eq!(r.paths, 4000);
    let again = loopwalk(&["simulate", "--model", "bd", "--z", "1", "--from", "1", "--to", "2", "--taboo", "0", "--paths", "4000", "--seed", "5", "--output", "json"]);
    assert_eq!(stdout(&again), stdout(&out));
}
