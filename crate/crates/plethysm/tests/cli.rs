//! End-to-end runs of the `plethysm` binary: exit codes, output formats,
//! schema conformance, determinism and the config file.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_plethysm"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_str(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn schema() -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema/report.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).expect("schema file")).expect("valid json")
}

fn assert_valid_report(text: &str) -> Value {
    let instance: Value = serde_json::from_str(text).expect("report is json");
    let validator = jsonschema::validator_for(&schema()).expect("schema compiles");
    if let Err(err) = validator.validate(&instance) {
        panic!("report does not match schema: {err}\n{text}");
    }
    instance
}

fn assert_valid_verdict_line(line: &str) {
    let defs = schema()["$defs"].clone();
    let wrapper = serde_json::json!({
        "$defs": defs,
        "$ref": "#/$defs/conjecture_verdict",
    });
    let instance: Value = serde_json::from_str(line).expect("verdict line is json");
    let validator = jsonschema::validator_for(&wrapper).expect("schema compiles");
    if let Err(err) = validator.validate(&instance) {
        panic!("verdict does not match schema: {err}\n{line}");
    }
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("plethysm-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn count_reports_exact_values() {
    let output = run(&["count", "--shape", "[6,2,2,1,1]"]);
    assert_eq!(output.status.code(), Some(0));
    let report = assert_valid_report(&stdout_str(&output));
    assert_eq!(report["command"], "count");
    let result = &report["results"][0];
    assert_eq!(result["h_count"], "41580");
    assert_eq!(result["v_count"], "27720");
    assert_eq!(result["dominance_holds"], true);
    assert_eq!(result["comparison"], "h_count > v_count");
}

#[test]
fn check_exit_codes() {
    let output = run(&["check", "--shape", "[6,2,2,1,1]", "--mode", "conjecture1"]);
    assert_eq!(output.status.code(), Some(2), "certified failure exits 2");
    let report = assert_valid_report(&stdout_str(&output));
    assert_eq!(report["results"][0]["verdict"], "FAILS_BY_COUNTING");
    assert_eq!(report["results"][0]["matrix_built"], false);

    let output = run(&["check", "--shape", "[2,2]", "--mode", "conjecture2"]);
    assert_eq!(output.status.code(), Some(0));
    let report = assert_valid_report(&stdout_str(&output));
    assert_eq!(report["results"][0]["verdict"], "FULL_RANK");
    assert_eq!(
        report["results"][0]["rank_report"]["certification"],
        "CERTIFIED_FULL"
    );

    // Hypothesis not met: undetermined but consistent, exit 0.
    let output = run(&["check", "--shape", "[1,1,1]", "--mode", "conjecture1"]);
    assert_eq!(output.status.code(), Some(0));
    let report = assert_valid_report(&stdout_str(&output));
    assert_eq!(report["results"][0]["verdict"], "UNDETERMINED");

    // A tiny enumeration cap hits a resource wall: exit 3.
    let output = run(&[
        "check",
        "--shape",
        "[2,2]",
        "--mode",
        "conjecture2",
        "--max-enum",
        "2",
    ]);
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn parse_errors_exit_1_with_position() {
    let output = run(&["count", "--shape", "[2,x]"]);
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(
        stderr.contains("position 3"),
        "stderr should carry the error position: {stderr}"
    );

    let output = run(&["check", "--shape", "[2,2]", "--mode", "conjecture9"]);
    assert_eq!(output.status.code(), Some(1));

    let output = run(&["count"]);
    assert_eq!(output.status.code(), Some(1), "missing flag is a usage error");
}

#[test]
fn scan_is_byte_identical_and_schema_conformant() {
    let args = ["scan", "--n", "6", "--mode", "conjecture1"];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0));
    let second = run(&args);
    assert_eq!(stdout_str(&first), stdout_str(&second), "reruns must match");

    // Thread count must not change output bytes.
    let single = bin()
        .args(args)
        .args(["--threads", "1"])
        .output()
        .expect("binary runs");
    assert_eq!(stdout_str(&first), stdout_str(&single));

    let text = stdout_str(&first);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 11, "p(6) = 11 verdict lines");
    for line in lines {
        assert_valid_verdict_line(line);
        let verdict: Value = serde_json::from_str(line).unwrap();
        assert!(verdict.get("elapsed_ms").is_none());
    }
}

#[test]
fn scan_counterexample_weight_flags_failure() {
    // N = 12 includes the shape whose rows fail by counting; a small cap
    // keeps the other 76 shapes cheap (counting needs no enumeration).
    let output = run(&["scan", "--n", "12", "--mode", "conjecture1", "--max-enum", "1000"]);
    assert_eq!(output.status.code(), Some(2));
    let text = stdout_str(&output);
    let failing: Vec<&str> = text
        .lines()
        .filter(|l| l.contains("FAILS_BY_COUNTING"))
        .collect();
    assert!(
        failing.iter().any(|l| l.contains("[6,2,2,1,1]")),
        "the counting counterexample must be flagged"
    );
}

#[test]
fn blacklist_report_conforms() {
    let output = run(&["blacklist", "--m", "2", "--n", "3"]);
    assert_eq!(output.status.code(), Some(0));
    let report = assert_valid_report(&stdout_str(&output));
    let result = &report["results"][0];
    assert_eq!(result["rows"], "10");
    assert_eq!(result["rank_report"]["rank"], 10);
    assert_eq!(result["rank_equals_rows"], true);
    assert_eq!(result["matches_k_rectangle"], true);

    let output = run(&["blacklist", "--m", "3", "--n", "2"]);
    assert_eq!(output.status.code(), Some(1), "m > n is a usage error");
}

#[test]
fn verify_proof_report_conforms() {
    let output = run(&["verify-proof", "--n", "2"]);
    assert_eq!(output.status.code(), Some(0));
    let report = assert_valid_report(&stdout_str(&output));
    let results = report["results"].as_array().unwrap();
    assert!(results.iter().all(|r| r["pass"] == true));
    assert!(results.iter().any(|r| r["check"] == "zero_filter"));
    assert!(results.iter().any(|r| r["check"] == "coefficient_count"));
    let induction = results.iter().find(|r| r["check"] == "induction").unwrap();
    assert_eq!(induction["mu0_isolated"], true);
    assert!(results.iter().any(|r| r["check"] == "left_kernel"));

    let output = run(&["verify-proof", "--n", "9"]);
    assert_eq!(output.status.code(), Some(3), "beyond the suite limit exits 3");
}

#[test]
fn matrix_export_bytes() {
    let dir = temp_dir("matrix");
    let mm = dir.join("k22.mtx");
    let output = run(&["matrix", "--shape", "[2,2]", "--out", mm.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(
        std::fs::read_to_string(&mm).unwrap(),
        "%%MatrixMarket matrix coordinate pattern general\n\
         % K [2,2]\n\
         3 3 6\n1 2\n1 3\n2 1\n2 3\n3 1\n3 2\n"
    );
    assert_eq!(
        std::fs::read_to_string(dir.join("k22.mtx.labels")).unwrap(),
        "1,2|3,4\n1,3|2,4\n1,4|2,3\n\n1,2|3,4\n1,3|2,4\n1,4|2,3\n"
    );

    let dense = dir.join("m22.txt");
    let output = run(&[
        "matrix", "--m", "2", "--n", "2", "--format", "dense", "--out",
        dense.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(
        std::fs::read_to_string(&dense).unwrap(),
        "011\n101\n110\n"
    );

    let output = run(&["matrix", "--shape", "[2,2]"]);
    assert_eq!(output.status.code(), Some(1), "missing --out is a usage error");

    let output = run(&["matrix", "--shape", "[2,2]", "--format", "csv", "--out", "x"]);
    assert_eq!(output.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn csv_format() {
    let output = run(&["scan", "--n", "4", "--mode", "conjecture2", "--format", "csv"]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout_str(&output);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "shape,mode,verdict,dominance_holds,h_count,v_count,matrix_built,rank,certification,resource_limited,reason"
    );
    assert_eq!(text.lines().count(), 6, "header plus p(4) rows");
    assert!(text.contains("\"[2,1,1]\",conjecture2,FULL_RANK"));
}

#[test]
fn config_file_and_flag_override() {
    let dir = temp_dir("config");
    let config = dir.join("plethysm.conf");
    std::fs::write(
        &config,
        "# settings\nprimes=2,3\nmax-enum=1000000\nmax-exact=500\n",
    )
    .unwrap();

    // K(2x2) = J - I has rank 2 over GF(2) and 3 over GF(3): the second
    // configured prime certifies.
    let output = run(&[
        "check",
        "--shape",
        "[2,2]",
        "--mode",
        "conjecture2",
        "--config",
        config.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    let report = assert_valid_report(&stdout_str(&output));
    assert_eq!(
        report["results"][0]["rank_report"]["moduli_used"],
        serde_json::json!([2, 3])
    );
    assert_eq!(report["params"]["max_enum"], 1_000_000);

    // Flags override the file: with only p=2 the modular rank stays at 2 and
    // the exact engine takes over.
    let output = bin()
        .args([
            "check", "--shape", "[2,2]", "--mode", "conjecture2",
            "--config", config.to_str().unwrap(),
            "--primes", "2",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let report = assert_valid_report(&stdout_str(&output));
    let rank_report = &report["results"][0]["rank_report"];
    assert_eq!(rank_report["moduli_used"], serde_json::json!([2]));
    assert_eq!(rank_report["certification"], "CERTIFIED_EXACT");
    assert_eq!(rank_report["method"], "fraction_free");

    let bad = dir.join("bad.conf");
    std::fs::write(&bad, "nonsense=1\n").unwrap();
    let output = run(&["count", "--shape", "[1]", "--config", bad.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn out_flag_writes_file() {
    let dir = temp_dir("out");
    let path = dir.join("report.json");
    let output = run(&[
        "count", "--shape", "2x5", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    let report = assert_valid_report(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(report["results"][0]["shape"], "[5,5]");
    assert_eq!(report["results"][0]["h_count"], "126");
    assert_eq!(report["results"][0]["v_count"], "945");
    std::fs::remove_dir_all(&dir).ok();
}
