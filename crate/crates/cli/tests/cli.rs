use std::process::{Command, Output};

fn alphadpp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alphadpp"))
        .args(args)
        .env("ALPHADPP_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV with `#` metadata lines, header first.
fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn malformed_blocks_exit_with_usage_error() {
    let o = alphadpp(&["density", "--blocks", "1:", "--M", "20"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("`1:`"), "{err}");
}

#[test]
fn bad_flags_and_empty_grids_are_usage_errors() {
    assert_eq!(alphadpp(&["density", "--M", "20"]).status.code(), Some(2));
    assert_eq!(
        alphadpp(&["corr", "--alpha", "-1/2", "--grid", "0:4:0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(alphadpp(&["nv", "--alpha", "1/0"]).status.code(), Some(2));
    assert_eq!(alphadpp(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(alphadpp(&["verify", "--only", "16"]).status.code(), Some(2));
    // Overlapping blocks fail BlockSpec validation.
    assert_eq!(
        alphadpp(&["density", "--blocks", "0:2,1:1"]).status.code(),
        Some(2)
    );
}

#[test]
fn density_has_metadata_header_and_zero_asymptote_outside_support() {
    let o = alphadpp(&[
        "density",
        "--blocks",
        "1:1",
        "--M",
        "20",
        "--grid",
        "-12:12:400",
        "--deterministic",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# alphadpp "));
    let config = lines.next().unwrap();
    assert!(config.starts_with("# config: "));
    let json: serde_json::Value = serde_json::from_str(config.trim_start_matches("# config: ")).unwrap();
    assert_eq!(json["blocks"], "1:1");
    assert_eq!(json["M"], 20);
    assert_eq!(json["grid"], "-12:12:400");
    assert!(!text.contains("# timestamp"));
    let rows = csv_rows(&text);
    assert_eq!(rows[0], ["x", "density", "asymptote"]);
    assert_eq!(rows.len(), 401);
    let edge = 2.0 * 2.0 * 20f64.sqrt();
    for r in &rows[1..] {
        let x: f64 = r[0].parse().unwrap();
        let asym: f64 = r[2].parse().unwrap();
        if x.abs() >= edge {
            assert_eq!(asym, 0.0, "x = {x}");
        }
    }
}

#[test]
fn runs_are_byte_identical_when_deterministic() {
    let args = [
        "sample",
        "--circle",
        "6",
        "--replicates",
        "50",
        "--seed",
        "9",
        "--deterministic",
    ];
    let a = alphadpp(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_alphadpp"))
        .args(args)
        .env("ALPHADPP_THREADS", "7")
        .output()
        .unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let rows = csv_rows(&stdout(&a));
    assert_eq!(rows[0].len(), 7);
    assert_eq!(rows.len(), 51);
    assert_eq!(rows[50][0], "49");
}

#[test]
fn timestamp_appears_without_deterministic() {
    let o = alphadpp(&["sk", "--alpha", "-1/3", "--grid", "0:4:5"]);
    assert!(stdout(&o).contains("# timestamp: "));
}

#[test]
fn structure_factor_has_kink_at_two_pi_alpha() {
    let edge = 2.0 * std::f64::consts::PI / 3.0;
    let grid = format!("0:{}:3", 2.0 * edge);
    let o = alphadpp(&["sk", "--alpha", "-1/3", "--grid", &grid, "--deterministic"]);
    let rows = csv_rows(&stdout(&o));
    let s: Vec<f64> = rows[1..].iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(s[0], 0.0);
    assert!((s[1] - 1.0).abs() < 1e-12);
    assert_eq!(s[2], 1.0);
}

#[test]
fn number_variance_carries_the_asymptote_column() {
    let o = alphadpp(&["nv", "--alpha", "-1", "--L", "0.1:100:log50", "--deterministic"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0], ["L", "variance", "small_L", "large_L"]);
    assert_eq!(rows.len(), 51);
    let last: Vec<f64> = rows[50].iter().map(|v| v.parse().unwrap()).collect();
    assert!((last[0] - 100.0).abs() < 1e-9);
    assert!((last[1] - last[3]).abs() < 1e-3);
}

#[test]
fn corr_emits_finite_limit_and_alpha_columns() {
    let o = alphadpp(&[
        "corr",
        "--a",
        "12",
        "--M",
        "20",
        "--grid",
        "0:3:31",
        "--deterministic",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0], ["s", "finite", "limit", "alpha_limit"]);
    let first: Vec<f64> = rows[1].iter().map(|v| v.parse().unwrap()).collect();
    assert!(first[1].abs() < 1e-9 && first[2].abs() < 1e-12);
    assert!((first[3] - 0.5).abs() < 1e-12);

    let o = alphadpp(&[
        "corr",
        "--alpha",
        "-1/2",
        "--grid",
        "0:4:9",
        "--format",
        "json",
        "--deterministic",
    ]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["columns"], serde_json::json!(["s", "alpha_limit"]));
    assert_eq!(doc["config"]["alpha"], "-1/2");
}

#[test]
fn output_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    let o = alphadpp(&[
        "density",
        "--blocks",
        "0:1",
        "--M",
        "100",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert_eq!(csv_rows(&text)[0], ["x", "density", "asymptote"]);
}

#[test]
fn verify_prints_json_lines_and_sets_exit_status() {
    let o = alphadpp(&["verify", "--quick", "--only", "2,11"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["id"], 2);
    assert_eq!(lines[1]["pass"], true);
    for key in ["observed", "tolerance"] {
        assert!(lines[0][key].is_number());
    }

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.jsonl");
    let o = alphadpp(&["verify", "--only", "9", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let written = std::fs::read_to_string(path).unwrap();
    assert!(written.contains("\"pass\":false"));
}
