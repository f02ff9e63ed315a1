use std::io::Write;
use std::process::{Command, Output};

fn oddbal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oddbal"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn oddbal_threads(threads: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oddbal"))
        .env("ODDBAL_THREADS", threads)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn expand_csv() {
    let out = oddbal(&["expand", "--n-max", "10", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,m,count"));
    assert_eq!(lines.next(), Some("0,0,1"));
    assert_eq!(lines.next(), Some("1,0,2"));
    let rows: Vec<_> = text.lines().skip(1).collect();
    assert!(rows.len() >= 42, "{} rows", rows.len());
    // row totals reproduce 1, 2, 5, 9, 16, 29
    let mut totals = [0u64; 6];
    for r in &rows {
        let f: Vec<&str> = r.split(',').collect();
        let n: usize = f[0].parse().unwrap();
        if n < 6 {
            totals[n] += f[2].parse::<u64>().unwrap();
        }
    }
    assert_eq!(totals, [1, 2, 5, 9, 16, 29]);
}

#[test]
fn expand_json_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.json");
    let out = oddbal(&[
        "expand",
        "--n-max",
        "5",
        "--format",
        "json",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(doc["max_n"], 5);
    assert_eq!(doc["entries"][0]["count"], "1");
}

#[test]
fn enumerate_json_lines() {
    let out = oddbal(&["enumerate", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let records: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(records.len(), 29);
    for r in &records {
        assert_eq!(r["size"], 12);
        assert_eq!(r["n"], 5);
        let parts: u64 = r["parts"]
            .as_array()
            .unwrap()
            .iter()
            .map(|p| p.as_u64().unwrap())
            .sum();
        assert_eq!(parts, 12);
    }
}

#[test]
fn decomposition_passes_by_default() {
    let out = oddbal(&["verify-decomposition"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(stdout(&out).lines().count(), 13);
}

#[test]
fn tight_threshold_reports_failures() {
    let out = oddbal(&["verify-transforms", "--threshold", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    let first: serde_json::Value = serde_json::from_str(err.lines().next().unwrap()).unwrap();
    assert!(first["check"].is_string());
    assert_eq!(first["threshold"], "0.000000000000000000000000000001");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["asym-report", "--a", "3", "--c", "3"][..],
        &["asym-report", "--digits", "10"],
        &["asym-report", "--c", "4"],
        &["asym-report", "--sequence", "partition", "--c", "3"],
        &["expand", "--n-max", "0"],
        &["lemma-ratios"],
        &["no-such-command"],
        &["verify-decomposition", "--grid", "/nonexistent/grid.csv"],
    ] {
        let out = oddbal(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn grid_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "z_re,z_im,tau_re,tau_im,order").unwrap();
    writeln!(f, "0.3,0,0,0.9,150").unwrap();
    writeln!(f, "0.4,0.1,0.5,0.8,170").unwrap();
    f.flush().unwrap();
    let out = oddbal(&[
        "verify-decomposition",
        "--grid",
        f.path().to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 2);
}

#[test]
fn output_is_stable_across_runs_and_threads() {
    let cases: [&[&str]; 3] = [
        &[
            "asym-report",
            "--checkpoints",
            "50,100,200",
            "--digits",
            "40",
        ],
        &["equidistribution", "--checkpoints", "60,120"],
        &["verify-transforms"],
    ];
    for args in cases {
        let a = oddbal_threads("1", args);
        let b = oddbal_threads("4", args);
        let c = oddbal_threads("4", args);
        assert_eq!(a.status.code(), b.status.code());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(b.stdout, c.stdout, "{args:?}");
    }
}
