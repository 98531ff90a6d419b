//! End-to-end tests of the command-line binary: exit codes, report
//! formats, determinism, and environment handling.

use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_catk");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("CATK_TOLERANCE")
        .output()
        .expect("binary runs")
}

fn run_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("CATK_TOLERANCE")
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn write_file(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path.to_str().unwrap().to_string()
}

/// Full CSV of the bounded four-point metric example.
const BOUNDED_CSV: &str = "A,B,O,C\n0,0.8,0.4,1\n0.8,0,0.4,1\n0.4,0.4,0,0.95\n1,1,0.95,0\n";

/// JSON document of the pulled-diagonal hyperbolic quadruple, with its
/// curvature stored inline.
const PULLED_JSON: &str = r#"{"labels":["A","P","B","Q"],
"matrix":[[0,1,2,2.44],[1,0,2.44,2.697],[2,2.44,0,1],[2.44,2.697,1,0]],
"curvature":-1}"#;

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let metric = write_file(dir.path(), "metric.csv", BOUNDED_CSV);
    let out = run(&["validate", "--input", &metric]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("verdict: Holds"));

    // a triangle violation is a valid semimetric but not a metric
    let bad = write_file(
        dir.path(),
        "bad.csv",
        "A,B,C\n0,1,1\n1,0,3\n1,3,0\n",
    );
    let out = run(&["validate", "--input", &bad]);
    assert_eq!(code(&out), 2);
    let text = stdout(&out);
    assert!(text.contains("verdict: Fails"));
    assert!(text.contains("triangle"));

    // asymmetry is malformed input
    let asym = write_file(dir.path(), "asym.csv", "A,B\n0,1\n2,0\n");
    let out = run(&["validate", "--input", &asym]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("symmetric"));

    // unreadable path is malformed too
    let out = run(&["validate", "--input", "/nonexistent/nope.csv"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn csv_row_shapes_are_equivalent() {
    let dir = tempfile::tempdir().unwrap();
    let full = write_file(dir.path(), "full.csv", BOUNDED_CSV);
    let lower = write_file(
        dir.path(),
        "lower.csv",
        "A,B,O,C\n0\n0.8,0\n0.4,0.4,0\n1,1,0.95,0\n",
    );
    let strict = write_file(
        dir.path(),
        "strict.csv",
        "A,B,O,C\n0.8\n0.4,0.4\n1,1,0.95\n",
    );
    let mut verdicts = Vec::new();
    for input in [&full, &lower, &strict] {
        let out = run(&[
            "scan",
            "--input",
            input,
            "--curvature",
            "1",
            "--condition",
            "upper",
        ]);
        let text = stdout(&out);
        let verdict = text
            .lines()
            .find(|l| l.starts_with("verdict:"))
            .unwrap()
            .to_string();
        let margin = text
            .lines()
            .find(|l| l.starts_with("worst margin:"))
            .unwrap()
            .to_string();
        verdicts.push((verdict, margin));
    }
    assert_eq!(verdicts[0], verdicts[1]);
    assert_eq!(verdicts[0], verdicts[2]);
}

#[test]
fn scan_reference_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let pulled = write_file(dir.path(), "pulled.json", PULLED_JSON);

    // curvature comes from the document; the lower bound holds
    let out = run(&["scan", "--input", &pulled, "--condition", "lower"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("verdict: Holds"));

    // the upper bound fails with the pulled-diagonal case as witness
    let out = run(&["scan", "--input", &pulled, "--condition", "upper"]);
    assert_eq!(code(&out), 3);
    let text = stdout(&out);
    assert!(text.contains("verdict: Fails"));
    assert!(text.contains("1.034697"), "witness value shown: {text}");

    // one-sided holds because one side does
    let out = run(&["scan", "--input", &pulled, "--condition", "one-sided"]);
    assert_eq!(code(&out), 0);

    // an explicit flag overrides the stored curvature
    let out = run(&[
        "scan",
        "--input",
        &pulled,
        "--curvature",
        "-2",
        "--condition",
        "upper",
    ]);
    assert!(stdout(&out).contains("at K = -2"));

    let bounded = write_file(dir.path(), "bounded.csv", BOUNDED_CSV);
    for condition in ["gromov-plus", "gromov-minus", "euler", "upper", "lower"] {
        let out = run(&[
            "scan",
            "--input",
            &bounded,
            "--curvature",
            "1",
            "--condition",
            condition,
        ]);
        assert_eq!(code(&out), 0, "{condition}: {}", stderr(&out));
    }
}

#[test]
fn scan_usage_errors_and_vacuous() {
    let dir = tempfile::tempdir().unwrap();
    let bounded = write_file(dir.path(), "bounded.csv", BOUNDED_CSV);

    // missing curvature
    let out = run(&["scan", "--input", &bounded, "--condition", "upper"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("curvature"));

    // zero curvature
    let out = run(&[
        "scan",
        "--input",
        &bounded,
        "--curvature",
        "0",
        "--condition",
        "upper",
    ]);
    assert_eq!(code(&out), 1);

    // two points leave nothing admissible
    let two = write_file(dir.path(), "two.csv", "A,B\n0,1\n1,0\n");
    let out = run(&[
        "scan",
        "--input",
        &two,
        "--curvature",
        "1",
        "--condition",
        "upper",
    ]);
    assert_eq!(code(&out), 4);
    assert!(stdout(&out).contains("verdict: Vacuous"));
}

#[test]
fn json_reports_are_deterministic_and_jobs_independent() {
    let dir = tempfile::tempdir().unwrap();
    let pulled = write_file(dir.path(), "pulled.json", PULLED_JSON);
    let args = [
        "scan",
        "--input",
        PULLED_JSON, // placeholder replaced below
        "--condition",
        "upper",
        "--format",
        "json",
    ];
    let mut args1: Vec<&str> = args.to_vec();
    args1[2] = &pulled;
    let first = run(&args1);
    let second = run(&args1);
    assert_eq!(code(&first), 3);
    assert_eq!(first.stdout, second.stdout, "reruns must be byte-identical");

    let mut with_jobs1: Vec<&str> = args1.clone();
    with_jobs1.extend(["--jobs", "1"]);
    let mut with_jobs4: Vec<&str> = args1.clone();
    with_jobs4.extend(["--jobs", "4"]);
    let one = run(&with_jobs1);
    let four = run(&with_jobs4);
    assert_eq!(
        one.stdout, four.stdout,
        "worker count must not affect the report"
    );
    assert_eq!(first.stdout, one.stdout);

    // schema fields present
    let text = stdout(&first);
    for field in [
        "\"command\"",
        "\"input_digest\"",
        "\"curvature\"",
        "\"condition\"",
        "\"verdict\"",
        "\"worst_margin\"",
        "\"admissible\"",
        "\"skipped\"",
        "\"witnesses\"",
        "\"points\"",
        "\"case\"",
        "\"value\"",
    ] {
        assert!(text.contains(field), "missing {field} in {text}");
    }
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let pulled = write_file(dir.path(), "pulled.json", PULLED_JSON);
    let to_stdout = run(&[
        "scan", "--input", &pulled, "--condition", "upper", "--format", "json",
    ]);
    let report_path = dir.path().join("report.json");
    let to_file = run(&[
        "scan",
        "--input",
        &pulled,
        "--condition",
        "upper",
        "--format",
        "json",
        "--output",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&to_file), 3, "exit code still reflects the verdict");
    assert!(stdout(&to_file).is_empty());
    let written = std::fs::read(&report_path).unwrap();
    assert_eq!(written, to_stdout.stdout);
}

#[test]
fn tolerance_env_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let pulled = write_file(dir.path(), "pulled.json", PULLED_JSON);
    let base = ["scan", "--input", pulled.as_str(), "--condition", "upper"];

    // generous env tolerance turns the failure into a hold
    let out = run_env(&base, "CATK_TOLERANCE", "0.05");
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    // the flag beats the env var
    let mut with_flag: Vec<&str> = base.to_vec();
    with_flag.extend(["--tolerance", "1e-9"]);
    let out = run_env(&with_flag, "CATK_TOLERANCE", "0.05");
    assert_eq!(code(&out), 3);

    // malformed env var is a usage error
    let out = run_env(&base, "CATK_TOLERANCE", "not-a-number");
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("CATK_TOLERANCE"));
}

#[test]
fn witness_cap_flags() {
    let dir = tempfile::tempdir().unwrap();
    // blown-up entry violates many configurations at K = 1
    let bad = write_file(
        dir.path(),
        "bad.csv",
        "A,B,C,D\n0,0.3,1.4,0.6\n0.3,0,0.4,0.5\n1.4,0.4,0,0.55\n0.6,0.5,0.55,0\n",
    );
    let base = [
        "scan", "--input", bad.as_str(), "--curvature", "1", "--condition", "upper",
    ];
    let mut capped: Vec<&str> = base.to_vec();
    capped.extend(["--witnesses", "2"]);
    let out = run(&capped);
    let text = stdout(&out);
    assert!(text.contains("showing 2 of"), "{text}");

    let mut all: Vec<&str> = base.to_vec();
    all.push("--all-witnesses");
    let out_all = run(&all);
    let text_all = stdout(&out_all);
    let shown = text_all.matches("  case ").count();
    assert!(shown > 2, "all witnesses shown: {shown}");
}

#[test]
fn reproduce_examples() {
    let out = run(&["reproduce", "--example", "exfpc_neg_a"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.matches("[PASS]").count(), 13);
    assert!(text.contains("13/13 checks pass"));

    let out = run(&["reproduce", "--all"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("72/72 checks pass"));
    assert!(!stdout(&out).contains("[FAIL]"));

    // unknown name: usage error listing what exists
    let out = run(&["reproduce", "--example", "nope"]);
    assert_eq!(code(&out), 1);
    let err = stderr(&out);
    assert!(err.contains("unknown example"));
    assert!(err.contains("concl_remarks"));

    // JSON format emits one object per check line
    let out = run(&["reproduce", "--example", "ex_to_extr_th", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(parsed.as_array().unwrap().iter().all(|l| l["pass"] == true));
}

#[test]
fn sample_property_runs() {
    for (k, check) in [
        ("1", "bound"),
        ("-1", "bound"),
        ("1", "halving"),
        ("-1", "euler-eq"),
        ("1", "transport"),
    ] {
        let out = run(&[
            "sample",
            "--curvature",
            k,
            "--check",
            check,
            "--n",
            "60",
            "--seed",
            "11",
        ]);
        assert_eq!(code(&out), 0, "{k} {check}: {}", stderr(&out));
        assert!(stdout(&out).contains("verdict: Holds"));
    }

    // zero curvature and infeasible caps are usage errors
    let out = run(&["sample", "--curvature", "0", "--check", "bound"]);
    assert_eq!(code(&out), 1);
    let out = run(&[
        "sample",
        "--curvature",
        "1",
        "--check",
        "bound",
        "--diam-cap",
        "3.0",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("infeasible"));

    // JSON sample reports are reproducible
    let args = [
        "sample",
        "--curvature",
        "-1",
        "--check",
        "halving",
        "--n",
        "40",
        "--seed",
        "5",
        "--format",
        "json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
    assert_eq!(code(&run(&["scan", "--help"])), 0);
    // a bad flag is a usage error
    assert_eq!(code(&run(&["scan", "--bogus"])), 1);
    // no subcommand prints usage with an error
    assert_eq!(code(&run(&[])), 1);
}
