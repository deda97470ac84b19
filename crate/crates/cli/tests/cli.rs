use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::NamedTempFile;

fn roman_count(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_roman-count"))
        .args(args)
        .env_remove("ROMAN_COUNT_THREADS")
        .output()
        .expect("binary runs")
}

fn graph_file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn report(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn count_p3_with_every_algorithm() {
    let f = graph_file("3 2\n0 1\n1 2\n");
    let path = f.path().to_str().unwrap();
    for alg in ["brute", "cover", "partial", "partial-memo"] {
        let r = report(&roman_count(&[
            "count",
            "--input",
            path,
            "--algorithm",
            alg,
        ]));
        assert_eq!(r["gamma_r"], 2);
        assert_eq!(r["count"], "1");
        assert_eq!(r["algorithm"], alg);
        assert_eq!((r["n"].as_u64(), r["m"].as_u64()), (Some(3), Some(2)));
        assert!(r["elapsed_ms"].as_f64().unwrap() >= 0.0);
    }
}

#[test]
fn count_reads_dimacs_and_thread_env() {
    let f = graph_file("c 4-cycle\np edge 4 4\ne 1 2\ne 2 3\ne 3 4\ne 4 1\n");
    let out = Command::new(env!("CARGO_BIN_EXE_roman-count"))
        .args([
            "count",
            "--format",
            "dimacs",
            "--input",
            f.path().to_str().unwrap(),
        ])
        .env("ROMAN_COUNT_THREADS", "3")
        .output()
        .unwrap();
    let r = report(&out);
    assert_eq!(
        (r["gamma_r"].as_u64(), r["count"].as_str()),
        (Some(3), Some("4"))
    );
    assert_eq!(r["threads"], 3);
}

#[test]
fn malformed_input_exits_1() {
    let f = graph_file("3 2\n0 1\n");
    let out = roman_count(&["count", "--input", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("header declares 2 edges"));
    assert!(out.stdout.is_empty());

    let out = roman_count(&["count", "--input", "/nonexistent/graph.txt"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn brute_over_limit_exits_2() {
    let f = graph_file("5 0\n");
    let out = roman_count(&[
        "count",
        "--input",
        f.path().to_str().unwrap(),
        "--algorithm",
        "brute",
        "--brute-limit",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn crosscheck_agrees() {
    let out = roman_count(&[
        "crosscheck",
        "--max-n",
        "8",
        "--trials",
        "25",
        "--seed",
        "7",
        "--json",
    ]);
    let r = report(&out);
    assert!(r["mismatch"].is_null());
    assert!(r["instances"].as_u64().unwrap() >= 75);

    let out = roman_count(&["crosscheck", "--max-n", "1", "--trials", "1"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("all agree"));
}

#[test]
fn crosscheck_reports_injected_fault() {
    let out = roman_count(&[
        "crosscheck",
        "--max-n",
        "4",
        "--trials",
        "1",
        "--inject-fault",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("mismatch on"), "{text}");
    assert!(text.contains("witness"));
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("bench.csv");
    let out = roman_count(&[
        "bench",
        "--from",
        "8",
        "--to",
        "12",
        "--step",
        "2",
        "--reps",
        "2",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,algorithm,repetition,elapsed_ms"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3 * 3 * 2);
    assert_eq!(rows[0][..3], ["8", "cover", "0"]);
    assert_eq!(rows[17][..3], ["12", "partial-memo", "1"]);
    assert!(rows.iter().all(|r| r[3].parse::<f64>().is_ok()));
}

#[test]
fn bench_empty_range_is_header_only() {
    let out = roman_count(&["bench", "--from", "10", "--to", "9"]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "n,algorithm,repetition,elapsed_ms\n"
    );
}

#[test]
fn generate_is_deterministic_and_parsable() {
    let args = [
        "generate", "--family", "gnp", "--n", "12", "--p", "0.4", "--seed", "99",
    ];
    let a = roman_count(&args);
    let b = roman_count(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let f = graph_file(&String::from_utf8(a.stdout).unwrap());
    let r = report(&roman_count(&[
        "count",
        "--input",
        f.path().to_str().unwrap(),
    ]));
    assert_eq!(r["n"], 12);

    let out = roman_count(&["generate", "--family", "gnp", "--n", "5"]);
    assert_eq!(out.status.code(), Some(1));
}
