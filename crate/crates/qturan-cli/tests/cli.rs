//! End-to-end checks of the command line surface: file formats, JSON
//! schema, exit codes.

use std::path::PathBuf;

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = qturan_cli::run(
        std::iter::once("qturan").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("qturan-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn canonical_json_is_byte_identical() {
    let args = ["exact", "--pattern", "P:3", "--n", "4", "--json-canonical"];
    let (code1, a, _) = run_cli(&args);
    let (code2, b, _) = run_cli(&args);
    assert_eq!(code1, 0);
    assert_eq!(code2, 0);
    assert_eq!(a, b);
    assert!(!a.contains("elapsed_ms"));
}

#[test]
fn json_report_matches_schema() {
    let (code, out, _) = run_cli(&["exact", "--pattern", "V:2", "--n", "3", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    for key in ["pattern", "n", "value", "exact", "method", "nodes", "elapsed_ms", "witness"] {
        assert!(v.get(key).is_some(), "missing key {key}");
    }
    assert_eq!(v["pattern"], "V:2");
    assert_eq!(v["n"], 3);
    assert_eq!(v["value"], 5);
    assert_eq!(v["exact"], true);
    let witness = v["witness"].as_array().unwrap();
    assert_eq!(witness.len(), 5);
    assert!(witness.iter().all(|w| {
        let s = w.as_str().unwrap();
        s.starts_with('{') && s.ends_with('}')
    }));
    // Field order is fixed by the schema.
    assert!(out.starts_with("{\"pattern\":\"V:2\",\"n\":3,\"value\":5,\"exact\":true,"));
}

#[test]
fn qfam_files_round_trip_through_commands() {
    let path = tmp("roundtrip.qfam");
    let path_s = path.to_str().unwrap();
    let (code, out, _) =
        run_cli(&["construct", "--pattern", "P:4", "--n", "9", "--out", path_s]);
    assert_eq!(code, 0);
    assert!(out.contains("size 392"), "{out}");

    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("#qfam v1\nn=9\n"));

    let (code, out, _) = run_cli(&["check", "--pattern", "P:4", "--family", path_s]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "free");

    // The same family does contain shorter paths.
    let (code, out, _) = run_cli(&["check", "--pattern", "P:2", "--family", path_s]);
    assert_eq!(code, 0);
    assert!(out.starts_with("not free"), "{out}");
    assert!(out.contains("copy of P:2"), "{out}");
}

#[test]
fn chains_subcommand_outputs() {
    let path = tmp("chains.qfam");
    let path_s = path.to_str().unwrap();
    let (code, _, _) =
        run_cli(&["construct", "--pattern", "V:2", "--n", "5", "--out", path_s]);
    assert_eq!(code, 0);

    let (code, out, _) = run_cli(&["chains", "--family", path_s]);
    assert_eq!(code, 0);
    assert!(out.contains("family: n=5, size=17"), "{out}");
    assert!(out.contains("lubell = "), "{out}");
    assert!(out.contains("profile C_0="), "{out}");
    assert!(out.contains("total chain weight = 2040"), "{out}");

    let (code, out, _) = run_cli(&["chains", "--family", path_s, "--fat", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("fat-chains(k=2) = 120"), "{out}");
}

#[test]
fn table_csv_file_output() {
    let path = tmp("p3.csv");
    let path_s = path.to_str().unwrap();
    let (code, out, _) = run_cli(&[
        "table",
        "--pattern",
        "P:3",
        "--n-range",
        "3..12",
        "--csv",
        path_s,
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("wrote"), "{out}");
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,lower,upper,exact,certified,method");
    assert_eq!(lines.len(), 11);
    assert_eq!(lines[8], "10,683,683,true,true,formula");
}

#[test]
fn wcnf_export_writes_expected_header() {
    let path = tmp("p2_q2.wcnf");
    let path_s = path.to_str().unwrap();
    let (code, out, _) =
        run_cli(&["export", "--pattern", "P:2", "--n", "2", "--wcnf", path_s]);
    assert_eq!(code, 0);
    assert!(out.contains("4 variables, 4 soft + 4 hard"), "{out}");
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("p wcnf 4 8 5\n"));
    assert!(text.lines().all(|l| l.ends_with(" 0") || l.starts_with("p ")));
}

#[test]
fn bound_json_flags_certification() {
    let (code, out, _) = run_cli(&["bound", "--pattern", "P:3", "--n", "10", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["lower"], "683");
    assert_eq!(v["upper"], "683");
    assert_eq!(v["upper_certified"], true);

    let (code, out, _) = run_cli(&["bound", "--pattern", "V:2", "--n", "12", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["lower"], "2049");
    assert_eq!(v["upper_certified"], false);
    assert_eq!(v["upper_kind"], "estimate");
}

#[test]
fn malformed_family_file_is_a_data_error() {
    let path = tmp("broken.qfam");
    std::fs::write(&path, "#qfam v1\nn=3\n2,1\n").unwrap();
    let (code, _, err) =
        run_cli(&["check", "--pattern", "P:2", "--family", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("ascending"), "{err}");
}

#[test]
fn qpat_file_patterns_work_end_to_end() {
    let path = tmp("cherry.qpat");
    std::fs::write(&path, "#qpat v1\n# out-star shape\nroot -> a\nroot -> b\n").unwrap();
    let spec = format!("file:{}", path.display());
    let (code, out, _) = run_cli(&["exact", "--pattern", &spec, "--n", "3"]);
    assert_eq!(code, 0);
    // Structurally the cherry, so the optimum matches V:2.
    assert!(out.contains("= 5"), "{out}");

    let bad = tmp("cycle.qpat");
    std::fs::write(&bad, "#qpat v1\na -> b\nb -> a\n").unwrap();
    let (code, _, err) = run_cli(&[
        "exact",
        "--pattern",
        &format!("file:{}", bad.display()),
        "--n",
        "3",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("cycle"), "{err}");
}

#[test]
fn zero_timeout_reports_interval_and_exit_1() {
    let (code, out, _) = run_cli(&[
        "exact",
        "--pattern",
        "V:2",
        "--n",
        "6",
        "--method",
        "bnb",
        "--timeout",
        "0",
    ]);
    assert_eq!(code, 1);
    assert!(out.contains("ex_v(V:2, Q_6) in [33, "), "{out}");
    assert!(out.contains("inexact"), "{out}");
}

#[test]
fn missing_file_reports_io_error() {
    let (code, _, err) =
        run_cli(&["check", "--pattern", "P:2", "--family", "/nonexistent/f.qfam"]);
    assert_eq!(code, 1);
    assert!(!err.is_empty());
}
