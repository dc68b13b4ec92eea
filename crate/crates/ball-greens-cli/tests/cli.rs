//! End-to-end tests of the command-line interface.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ball-greens"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn ball-greens")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Pull a numeric field out of a flat JSON record.
fn json_number(record: &str, key: &str) -> f64 {
    let pat = format!("\"{key}\":");
    let start = record.find(&pat).unwrap_or_else(|| panic!("no key {key} in {record}")) + pat.len();
    let rest = &record[start..];
    let end = rest
        .find([',', '}'])
        .unwrap_or_else(|| panic!("unterminated {key}"));
    rest[..end].parse().unwrap_or_else(|_| panic!("bad number for {key}: {}", &rest[..end]))
}

#[test]
fn eval_poisson_centered_source_on_boundary() {
    let out = run(&["eval", "--dim", "3", "--z", "0,0,0", "--x", "1,0,0"]);
    assert!(out.status.success());
    let rec = stdout(&out);
    let value = json_number(&rec, "value");
    assert!((value + 3.0 / (8.0 * std::f64::consts::PI)).abs() < 1e-15);
    assert!(rec.contains("\"problem\":\"poisson\""));
    assert!(rec.contains("centered_source"));
}

#[test]
fn eval_eeg_radial_example() {
    let out = run(&[
        "eval", "--dim", "3", "--z", "0.5,0,0", "--moment", "1,0,0", "--x", "0,1,0",
    ]);
    assert!(out.status.success());
    let rec = stdout(&out);
    assert!(rec.contains("\"problem\":\"eeg\""));
    assert!(rec.contains("\"moment\":"));
    let value = json_number(&rec, "value");
    assert!((value - 0.085411505210061).abs() < 1e-12);
}

#[test]
fn eval_radius_scaling_example() {
    let out = run(&["eval", "--dim", "3", "--radius", "2", "--z", "0,0,0", "--x", "1,0,0"]);
    assert!(out.status.success());
    let value = json_number(&stdout(&out), "value");
    let pi = std::f64::consts::PI;
    let expected = 0.5 * (-1.0 / (2.0 * pi) - 1.0 / (32.0 * pi));
    assert!((value - expected).abs() < 1e-15);
}

#[test]
fn eval_error_exit_codes() {
    // Source coincidence: evaluation error.
    let out = run(&["eval", "--dim", "3", "--z", "0.5,0,0", "--x", "0.5,0,0"]);
    assert_eq!(out.status.code(), Some(3));
    // Centered dipole: evaluation error.
    let out = run(&[
        "eval", "--dim", "2", "--z", "0,0", "--moment", "1,0", "--x", "0.5,0",
    ]);
    assert_eq!(out.status.code(), Some(3));
    // Dimension mismatch: validation error.
    let out = run(&["eval", "--dim", "2", "--z", "0.5,0,0", "--x", "0,1,0"]);
    assert_eq!(out.status.code(), Some(2));
    // Zero moment: validation error.
    let out = run(&[
        "eval", "--dim", "2", "--z", "0.5,0", "--moment", "0,0", "--x", "0,0.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // Point outside the ball: validation error.
    let out = run(&["eval", "--dim", "2", "--z", "0.5,0", "--x", "1.5,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_round_trips_value_through_json() {
    let out = run(&["eval", "--dim", "2", "--z", "0.3,0.1", "--x", "-0.2,0.6"]);
    assert!(out.status.success());
    let value = json_number(&stdout(&out), "value");
    let direct = ball_greens::greens::greens_poisson(&[0.3, 0.1], &[-0.2, 0.6])
        .unwrap()
        .value;
    assert_eq!(value.to_bits(), direct.to_bits());
}

#[test]
fn grid_one_dimensional_rows() {
    let out = run(&["grid", "--dim", "1", "--z", "0.5", "--res", "3", "--box", "-1,1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "x1,value,flags");
    // Middle row is x = 0: G = |0 − 0.5|/2 − 0 = 0.25.
    let mid: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(mid[0].parse::<f64>().unwrap(), 0.0);
    assert_eq!(mid[1].parse::<f64>().unwrap(), 0.25);
}

#[test]
fn grid_outside_ball_is_empty() {
    let out = run(&["grid", "--dim", "1", "--z", "0.5", "--res", "3", "--box", "2,3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[1], "");
        assert_eq!(cols[2], "");
    }
}

#[test]
fn grid_marks_singular_node_empty() {
    // Node (0.5, 0) coincides with the source.
    let out = run(&[
        "grid", "--dim", "2", "--z", "0.5,0", "--res", "5,5", "--box", "-1,1,-1,1",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let singular: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("5.0000000000000000e-1,0.0000000000000000e0,"))
        .collect();
    assert_eq!(singular.len(), 1);
    assert!(singular[0].ends_with(",,"));
}

#[test]
fn grid_rerun_is_byte_identical() {
    let args = [
        "grid", "--dim", "2", "--z", "0.3,0.2", "--moment", "0,1", "--res", "7,7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn grid_json_stream() {
    let out = run(&[
        "grid", "--dim", "1", "--z", "0.5", "--res", "3", "--output", "json",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("{\"x\":[-1.0000000000000000e0],\"value\":"));
    assert!(lines.iter().all(|l| l.ends_with("}")));
}

#[test]
fn grid_rejects_bad_specs() {
    let out = run(&["grid", "--dim", "4", "--z", "0,0,0,0", "--res", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["grid", "--dim", "2", "--z", "0,0", "--res", "1,5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["grid", "--dim", "2", "--z", "0,0", "--res", "5", "--box", "1,0,0,1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_empty_dims_passes_with_empty_report() {
    let out = run(&["verify", "--dims", ""]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out).trim(),
        "{\"seed\":42,\"dims\":[],\"checks\":[],\"pass\":true}"
    );
}

#[test]
fn verify_is_deterministic_and_passes() {
    let args = ["verify", "--seed", "42", "--dims", "1,2"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.contains("\"pass\":true"));
    assert!(text.contains("\"seed\":42"));
}

#[test]
fn verify_rejects_corrupt_flags() {
    let out = run(&["verify", "--abs-tol", "garbage"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["verify", "--dims", "0,2"]);
    assert_eq!(out.status.code(), Some(2));
}
