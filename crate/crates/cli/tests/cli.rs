//! End-to-end tests of the binary: exit codes, file round trips, determinism,
//! and the agreement between human and JSON output.

use std::path::Path;
use std::process::Output;

fn luinv(dir: &Path, args: &[&str]) -> Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_luinv"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("terminated normally")
}

/// The `trace = <value>` line of `invariant` output.
fn trace_line(out: &str) -> f64 {
    out.lines()
        .find_map(|l| l.strip_prefix("trace = "))
        .expect("trace line present")
        .parse()
        .expect("trace parses")
}

#[test]
fn random_output_feeds_every_other_command() {
    let dir = tempfile::tempdir().unwrap();
    let o = luinv(
        dir.path(),
        &[
            "random", "--dims", "2,3,2", "--seed", "4", "--out", "st.json",
        ],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("config"), "config echo missing");

    let o = luinv(
        dir.path(),
        &["invariant", "--state", "st.json", "--path", "1,2,3"],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("retracing = false"));

    let o = luinv(
        dir.path(),
        &[
            "spectrum", "--state", "st.json", "--path", "1,2,1,2", "--out", "sp.csv",
        ],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("sp.csv")).unwrap();
    assert!(csv.starts_with("k,re,im\n"));
}

#[test]
fn identical_invocations_write_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.json", "b.json"] {
        let o = luinv(
            dir.path(),
            &["random", "--dims", "2,2", "--seed", "9", "--out", name],
        );
        assert_eq!(code(&o), 0);
    }
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    let b = std::fs::read(dir.path().join("b.json")).unwrap();
    assert_eq!(a, b, "same seed must give byte-identical state files");
}

#[test]
fn zero_dimension_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = luinv(dir.path(), &["random", "--dims", "0,2", "--out", "x.json"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("invalid dimension"), "{}", stderr(&o));
}

#[test]
fn consecutive_repeat_in_path_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    luinv(
        dir.path(),
        &[
            "random", "--dims", "2,2,2", "--seed", "1", "--out", "st.json",
        ],
    );
    let o = luinv(
        dir.path(),
        &["invariant", "--state", "st.json", "--path", "1,1,2"],
    );
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("invalid path"), "{}", stderr(&o));
}

#[test]
fn zero_label_exits_2_with_one_based_hint() {
    let dir = tempfile::tempdir().unwrap();
    luinv(
        dir.path(),
        &["random", "--dims", "2,2", "--seed", "1", "--out", "st.json"],
    );
    let o = luinv(
        dir.path(),
        &["invariant", "--state", "st.json", "--path", "0,1"],
    );
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("1-based"), "{}", stderr(&o));
}

#[test]
fn missing_state_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = luinv(
        dir.path(),
        &["invariant", "--state", "nope.json", "--path", "1,2"],
    );
    assert_eq!(code(&o), 2);
}

#[test]
fn bell_times_spectator_pair_cycle_gives_one_quarter() {
    // (|00> + |11>)/sqrt(2) on subsystems 1,2 with a spectator qubit:
    // the doubled pair cycle equals the squared marginal purity, 1/4.
    let dir = tempfile::tempdir().unwrap();
    let r = 0.7071067811865476f64;
    let state = format!(
        r#"{{"kind":"pure","dims":[2,2,2],"amp":[[{r},0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0],[{r},0.0],[0.0,0.0]]}}"#
    );
    std::fs::write(dir.path().join("bell.json"), state).unwrap();
    let o = luinv(
        dir.path(),
        &["invariant", "--state", "bell.json", "--path", "1,2,1,2"],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!((trace_line(&out) - 0.25).abs() <= 1e-12, "{out}");
    assert!(out.contains("retracing = true"));
    assert!(out.contains("positive = true"));
}

#[test]
fn product_state_full_cycle_gives_one() {
    let dir = tempfile::tempdir().unwrap();
    let state = r#"{"kind":"pure","dims":[2,2,2],"amp":[[1.0,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0]]}"#;
    std::fs::write(dir.path().join("prod.json"), state).unwrap();
    let o = luinv(
        dir.path(),
        &["invariant", "--state", "prod.json", "--path", "1,2,3"],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!((trace_line(&stdout(&o)) - 1.0).abs() <= 1e-12);
}

#[test]
fn spectrum_of_tripartite_ten_level_state_has_hundred_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = luinv(
        dir.path(),
        &[
            "random", "--dims", "10,10,10", "--seed", "42", "--out", "big.json",
        ],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = luinv(
        dir.path(),
        &[
            "spectrum", "--state", "big.json", "--path", "1,2,3", "--out", "sp.csv",
        ],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("sp.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 101, "header plus one row per eigenvalue");
    assert_eq!(lines[0], "k,re,im");
    for (k, line) in lines[1..].iter().enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 3);
        assert_eq!(fields[0], k.to_string());
        fields[1].parse::<f64>().unwrap();
        fields[2].parse::<f64>().unwrap();
    }
}

#[test]
fn retracing_spectrum_is_real() {
    let dir = tempfile::tempdir().unwrap();
    luinv(
        dir.path(),
        &[
            "random", "--dims", "3,3,3", "--seed", "8", "--out", "st.json",
        ],
    );
    let o = luinv(
        dir.path(),
        &[
            "spectrum", "--state", "st.json", "--path", "1,2,3,2", "--out", "sp.csv",
        ],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("sp.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let im: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert!(
            im.abs() <= 1e-10,
            "retracing spectrum must be real, got {im}"
        );
    }
}

#[test]
fn verify_equiv_passes_and_alias_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let long = luinv(
        dir.path(),
        &["verify", "--suite", "equiv", "--trials", "5", "--seed", "9"],
    );
    assert_eq!(code(&long), 0, "{}", stderr(&long));
    assert!(stdout(&long).contains("PASS pauli_bridge"));
    let short = luinv(dir.path(), &["equiv", "--trials", "5", "--seed", "9"]);
    assert_eq!(code(&short), 0);
    assert_eq!(stdout(&long), stdout(&short));
}

#[test]
fn verify_structure_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = luinv(
        dir.path(),
        &["verify", "--suite", "prop2", "--trials", "3", "--seed", "2"],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("swap_conjugation"));
    assert!(out.contains("adjoint_reversal"));
    assert!(out.contains("retracing_spectrum_floor"));
}

#[test]
fn verify_full_report_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = luinv(
        dir.path(),
        &["verify", "--suite", "all", "--trials", "2", "--seed", "7"],
    );
    let b = luinv(
        dir.path(),
        &["verify", "--suite", "all", "--trials", "2", "--seed", "7"],
    );
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn unknown_suite_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = luinv(dir.path(), &["verify", "--suite", "bogus"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("unknown suite"), "{}", stderr(&o));
}

#[test]
fn survey_writes_prefix_files_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    for prefix in ["s1", "s2"] {
        let o = luinv(
            dir.path(),
            &[
                "survey",
                "--dims",
                "2,2,2",
                "--samples",
                "5",
                "--seed",
                "7",
                "--out",
                prefix,
            ],
        );
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    let csv1 = std::fs::read(dir.path().join("s1.csv")).unwrap();
    let csv2 = std::fs::read(dir.path().join("s2.csv")).unwrap();
    assert_eq!(csv1, csv2);
    let sum1 = std::fs::read_to_string(dir.path().join("s1.json")).unwrap();
    let sum2 = std::fs::read_to_string(dir.path().join("s2.json")).unwrap();
    assert_eq!(sum1, sum2);
    let parsed: serde_json::Value = serde_json::from_str(&sum1).unwrap();
    assert_eq!(parsed["samples"], 5);
    assert_eq!(parsed["failed"], 0);
    // 5 samples x d^2 eigenvalues, plus the header
    let rows = String::from_utf8(csv1).unwrap().lines().count();
    assert_eq!(rows, 1 + 5 * 4);
}

#[test]
fn json_flag_reports_identical_numbers() {
    let dir = tempfile::tempdir().unwrap();
    luinv(
        dir.path(),
        &[
            "random", "--dims", "2,3,2", "--seed", "4", "--out", "st.json",
        ],
    );
    let human = luinv(
        dir.path(),
        &["invariant", "--state", "st.json", "--path", "1,2,3"],
    );
    let machine = luinv(
        dir.path(),
        &[
            "invariant",
            "--state",
            "st.json",
            "--path",
            "1,2,3",
            "--json",
        ],
    );
    assert_eq!(code(&machine), 0, "{}", stderr(&machine));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&machine)).unwrap();
    let json_trace = parsed["trace"].as_f64().unwrap();
    assert_eq!(
        json_trace.to_bits(),
        trace_line(&stdout(&human)).to_bits(),
        "human and JSON output must carry the same number"
    );
    assert_eq!(parsed["config"]["path"], serde_json::json!([1, 2, 3]));
}

#[test]
fn verify_json_lists_every_check() {
    let dir = tempfile::tempdir().unwrap();
    let o = luinv(
        dir.path(),
        &[
            "verify", "--suite", "equiv", "--trials", "3", "--seed", "1", "--json",
        ],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(parsed["passed"], true);
    let checks = parsed["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    for c in checks {
        assert_eq!(c["passed"], true);
        assert!(c["details"]["tolerance"].is_string());
    }
}
