use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use certeig::numerics::{parse_decimal, Rational};
use certeig_cli::report::{width_stats, Report};
use certeig_cli::{parse_matrix, Mode};
use tempfile::TempDir;

const EXAMPLE_JSON: &str = r#"{"matrix": [
  ["1.25", "1", "0.75", "0.5", "0.25"],
  ["1", "0", "0", "0", "0"],
  ["-1", "1", "0", "0", "0"],
  ["0", "0", "1", "3", "0"],
  ["0", "0", "0", "0.5", "5"]
]}"#;

const EXAMPLE_CSV: &str = "1.25,1,0.75,0.5,0.25\n1,0,0,0,0\n-1,1,0,0,0\n0,0,1,3,0\n0,0,0,0.5,5\n";

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn certeig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_certeig")).args(args).output().unwrap()
}

fn report_of(out: &Output) -> Report {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn r(s: &str) -> Rational {
    parse_decimal(s).unwrap()
}

#[test]
fn example_json_round_trip() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "example.json", EXAMPLE_JSON);
    let report = report_of(&certeig(&[p(&input)]));

    assert_eq!(report.input.dimension, 5);
    assert_eq!(report.characteristic_polynomial, ["-8.875", "-0.625", "-17", "24.75", "-9.25", "1"]);
    assert_eq!(report.sigma_h1, 3);
    assert_eq!(report.final_intervals.len(), 3);
    assert!(report.point_eigenvalues.is_empty());

    let widths: Vec<Rational> = report.final_intervals.iter().map(|iv| r(&iv.hi) - r(&iv.lo)).collect();
    for (iv, w) in report.final_intervals.iter().zip(&widths) {
        assert_eq!(r(&iv.width), *w);
        assert!(*w <= r("1e-7"));
    }
    let (avg, max) = width_stats(&widths);
    assert_eq!(report.metrics.average_width, avg);
    assert_eq!(report.metrics.max_width, max);
    assert_eq!(report.metrics.final_intervals, 3);
    assert_eq!(report.metrics.candidate_intervals, report.initial_intervals.len());

    // serializing the parsed report gives the same document back
    let again: Report = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(again, report);
}

#[test]
fn csv_and_json_agree() {
    let dir = TempDir::new().unwrap();
    let csv = write(&dir, "example.csv", EXAMPLE_CSV);
    let json = write(&dir, "example.json", EXAMPLE_JSON);
    let a = parse_matrix(&csv, Mode::Exact).unwrap();
    assert_eq!(a[(0, 0)], r("5/4"));
    assert_eq!(a, parse_matrix(&json, Mode::Exact).unwrap());

    let from_csv = report_of(&certeig(&[p(&csv), "--epsilon", "1e-9"]));
    let from_json = report_of(&certeig(&[p(&json), "--epsilon", "1e-9"]));
    assert_eq!(from_csv.final_intervals, from_json.final_intervals);
}

#[test]
fn float_mode_matches_exact_roots() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "example.json", EXAMPLE_JSON);
    let report = report_of(&certeig(&[p(&input), "--mode", "float", "--bits", "128"]));
    assert_eq!(report.final_intervals.len(), 3);
    for (iv, z) in report.final_intervals.iter().zip(["1.7329460830345789", "2.9347267338623491", "4.9972978811116283"]) {
        assert!(r(&iv.lo) <= r(z) && r(z) <= r(&iv.hi));
    }
}

#[test]
fn text_output() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "example.csv", EXAMPLE_CSV);
    let out = certeig(&[p(&input), "--format", "text", "--jobs", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("sigma(H_1) = 3"));
    assert!(text.contains("final intervals          3"));
}

#[test]
fn svg_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "example.json", EXAMPLE_JSON);
    let (a, b) = (dir.path().join("a.svg"), dir.path().join("b.svg"));
    assert!(certeig(&[p(&input), "--svg", p(&a)]).status.success());
    assert!(certeig(&[p(&input), "--svg", p(&b)]).status.success());
    let svg = std::fs::read_to_string(&a).unwrap();
    assert_eq!(svg, std::fs::read_to_string(&b).unwrap());

    assert!(svg.starts_with("<?xml"));
    assert_eq!(svg.matches("<circle class=\"disk").count(), 5);
    assert_eq!(svg.matches("class=\"disk certified\"").count(), 4);
    assert_eq!(svg.matches("<line class=\"interval\"").count(), 3);
    assert_eq!(svg.matches("<line class=\"refined\"").count(), 3);
}

#[test]
fn diagonal_gives_points() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "diag.csv", "1,0,0\n0,2,0\n0,0,3\n");
    let report = report_of(&certeig(&[p(&input)]));
    assert_eq!(report.point_eigenvalues, ["1", "2", "3"]);
    assert!(report.final_intervals.is_empty());
}

#[test]
fn rotation_has_no_real_eigenvalues() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "rot.json", r#"{"matrix": [["0", "-1"], ["1", "0"]]}"#);
    let report = report_of(&certeig(&[p(&input)]));
    assert_eq!(report.sigma_h1, 0);
    assert!(report.final_intervals.is_empty() && report.point_eigenvalues.is_empty());
    assert_eq!(report.metrics.max_width, None);
}

#[test]
fn bad_input_exits_with_2() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("ragged.csv", "1,2\n3\n"),
        ("wide.csv", "1,2,3\n4,5,6\n"),
        ("word.json", r#"{"matrix": [["1", "x"], ["0", "1"]]}"#),
        ("bare.json", r#"{"matrix": [[1, 0], [0, 1]]}"#),
        ("empty.json", r#"{"matrix": []}"#),
    ];
    for (name, text) in cases {
        let input = write(&dir, name, text);
        let out = certeig(&[p(&input)]);
        assert_eq!(out.status.code(), Some(2), "{name}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"), "{name}");
    }
    let input = write(&dir, "ok.csv", EXAMPLE_CSV);
    assert_eq!(certeig(&[p(&input), "--epsilon", "0"]).status.code(), Some(2));
    assert_eq!(certeig(&[p(&input), "--epsilon", "-1e-3"]).status.code(), Some(2));
    assert_eq!(certeig(&[p(&dir.path().join("missing.csv"))]).status.code(), Some(2));
}

#[test]
fn bare_numbers_are_fine_in_float_mode() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "bare.json", r#"{"matrix": [[2, 0], [0, -1.5]]}"#);
    let report = report_of(&certeig(&[p(&input), "--mode", "float"]));
    assert_eq!(report.point_eigenvalues, ["-1.5", "2"]);
}

#[test]
fn precision_exhausted_exits_with_3() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "example.json", EXAMPLE_JSON);
    let out = certeig(&[p(&input), "--mode", "float", "--bits", "64", "--epsilon", "1e-30"]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}
