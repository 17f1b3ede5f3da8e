use std::process::Command;

use nilform_cli::{parse_degrees, run, CheckReport, DReport, EvalReport, StokesReport, VcalcReport};

fn nilform(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_nilform")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn stdout(args: &[&str]) -> String {
    let (code, out, err) = nilform(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    out
}

#[test]
fn exterior_derivative_examples() {
    assert_eq!(stdout(&["d", "--form", "-y*dx + x*dy", "--dim", "2"]), "2*dx^dy\n");
    assert_eq!(stdout(&["d", "--form", "x*dy^dz", "--dim", "3"]), "dx^dy^dz\n");
    assert_eq!(stdout(&["d", "--form", "x**2*y"]), "2*x*y*dx + x**2*dy\n");
    assert_eq!(stdout(&["d", "--form", "dx^dy^dz", "--allow-top"]), "0\n");
}

#[test]
fn parse_errors_exit_2_with_a_diagnostic() {
    let (code, out, err) = nilform(&["d", "--form", "f", "--dim", "3"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("unknown identifier `f` at 1:1"), "{err}");
    assert_eq!(nilform(&["d", "--form", "dx + dy^dz"]).0, 2);
    assert_eq!(nilform(&["d", "--form", "dx^dy^dz"]).0, 2);
    assert_eq!(nilform(&["d", "--form", "x4*dx1", "--dim", "3"]).0, 2);
    assert_eq!(nilform(&["stokes", "--form", "0.5*x*dy", "--backend", "rational"]).0, 2);
    assert_eq!(nilform(&["eval", "--form", "sin(x)", "--at", "1,2,3", "--backend", "rational"]).0, 2);
    assert_eq!(nilform(&["stokes", "--form", "x*dy", "--tangents", "1,0,0"]).0, 2);
    assert_eq!(nilform(&["check", "--degrees", "3", "--dim", "3"]).0, 2);
    assert_eq!(nilform(&["check", "--pool", "transcendental"]).0, 2);
    assert_eq!(nilform(&["--tol", "-1", "d", "--form", "x"]).0, 2);
}

#[test]
fn repeated_differential_warns() {
    let (code, out, err) = nilform(&["d", "--form", "x*dx^dy + dy^dy"]);
    assert_eq!(code, 0);
    assert_eq!(out, "0\n");
    assert!(err.starts_with("warning:"), "{err}");
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(nilform(&["--help"]).0, 0);
    assert_eq!(nilform(&["--version"]).0, 0);
    assert_eq!(nilform(&[]).0, 2);
}

#[test]
fn eval_on_tangents_and_along_a_direction() {
    let out = stdout(&["eval", "--form", "x*dy^dz", "--at", "2,0,0", "--tangents", "0,1,0;0,0,1", "--backend", "rational"]);
    assert_eq!(out, "2\n");
    let out = stdout(&["eval", "--form", "x**2*y", "--at", "1,2,3", "--direction", "1,0,0", "--backend", "rational"]);
    assert_eq!(out, "2 + (4)*e1\n");
    let json = stdout(&["eval", "--form", "x**2*y", "--at", "1/2,2,3", "--direction", "1,0,0", "--backend", "rational", "--json"]);
    let report: EvalReport = serde_json::from_str(&json).unwrap();
    assert_eq!(report.at, ["1/2", "2", "3"]);
    assert_eq!(report.weil.unwrap()[1].value, "2");
}

#[test]
fn stokes_worked_example_and_negative_control() {
    let out = stdout(&["stokes", "--form", "x*dy", "--backend", "rational"]);
    assert!(out.contains("top_residual: 0\n") && out.ends_with("pass: true\n"), "{out}");

    let (code, out, _) = nilform(&["stokes", "--form", "x*dy", "--rhs-form", "2*dx^dy", "--backend", "rational"]);
    assert_eq!(code, 1);
    assert!(out.contains("top_residual: 1\n"), "{out}");
    // the full coefficient tables of both sides are reported
    assert!(out.contains("boundary integral:\n  e1*e2        1\n"), "{out}");
    assert!(out.contains("integral of d:\n  e1*e2        2\n"), "{out}");
}

#[test]
fn stokes_json_schema() {
    let json = stdout(&["stokes", "--form", "x*dy", "--backend", "rational", "--json"]);
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    for key in ["command", "dim", "degree", "backend", "seed", "lhs", "rhs", "top_residual", "lower_order_max", "pass"] {
        assert!(value.get(key).is_some(), "missing {key}");
    }
    assert_eq!(value["lhs"][0]["monomial"], serde_json::json!([1, 2]));
    assert_eq!(value["lhs"][0]["value"], "1");
    let report: StokesReport = serde_json::from_value(value).unwrap();
    assert_eq!(serde_json::to_string_pretty(&report).unwrap() + "\n", json);
}

#[test]
fn random_stokes_on_both_backends() {
    for k in ["0", "1", "2"] {
        let json = stdout(&["stokes", "--random", "--degree", k, "--seed", "17", "--backend", "rational", "--json"]);
        let report: StokesReport = serde_json::from_str(&json).unwrap();
        assert!(report.pass);
        assert_eq!(report.top_residual, "0");
        assert_eq!(report.lower_order_max, "0");
    }
    let argv = ["stokes", "--random", "--degree", "3", "--dim", "4", "--seed", "3", "--pool", "transcendental", "--json"];
    let report: StokesReport = serde_json::from_str(&stdout(&argv)).unwrap();
    assert!(report.pass && report.backend == "float");
}

#[test]
fn vcalc_examples() {
    assert_eq!(stdout(&["vcalc", "div", "--fx", "x", "--fy", "y", "--fz", "z"]), "3\n");
    assert_eq!(stdout(&["vcalc", "curl", "--fx", "-y", "--fy", "x", "--fz", "0"]), "(0, 0, 2)\n");
    assert_eq!(stdout(&["vcalc", "grad", "--f", "1"]), "(0, 0, 0)\n");
    assert_eq!(stdout(&["vcalc", "div", "--fx", "y*z", "--fy", "z*x", "--fz", "x*y"]), "0\n");
    let json = stdout(&["vcalc", "flux", "--fx", "1", "--fy", "2", "--fz", "3", "--at", "0,0,0", "--a", "1,0,0", "--b", "0,1,0", "--json"]);
    let report: VcalcReport = serde_json::from_str(&json).unwrap();
    assert_eq!((report.result.as_str(), report.pass), ("3", true));
    assert_eq!(nilform(&["vcalc", "curl", "--fx", "x"]).0, 2);
}

#[test]
fn check_covers_requested_degrees() {
    let json = stdout(&["check", "--degrees", "0..4", "--dim", "5", "--trials", "3", "--json"]);
    let report: CheckReport = serde_json::from_str(&json).unwrap();
    assert!(report.pass);
    assert_eq!(report.degrees.iter().map(|d| d.degree).collect::<Vec<_>>(), [0, 1, 2, 3, 4]);
    assert_eq!(report.backend, "rational");
    let (code, _, err) = nilform(&["check", "--trials", "0"]);
    assert_eq!(code, 2);
    assert!(err.contains("trials"), "{err}");
}

#[test]
fn output_is_byte_deterministic() {
    for argv in [
        &["check", "--trials", "6", "--seed", "8", "--backend", "float", "--pool", "transcendental"][..],
        &["stokes", "--random", "--degree", "1", "--seed", "4", "--backend", "float"][..],
        &["d", "--form", "sin(x*y)*dz + exp(z)*dx", "--json"][..],
    ] {
        assert_eq!(nilform(argv), nilform(argv));
    }
}

#[test]
fn in_process_runner_matches_the_binary() {
    let argv = ["d", "--form", "x*dy", "--json"];
    let outcome = run(std::iter::once("nilform").chain(argv));
    let (code, out, _) = nilform(&argv);
    assert_eq!((outcome.code, outcome.stdout.as_str()), (code, out.as_str()));
    let report: DReport = serde_json::from_str(&out).unwrap();
    assert_eq!(report.result, "dx^dy");
}

#[test]
fn degree_lists() {
    assert_eq!(parse_degrees("0..4").unwrap(), vec![0, 1, 2, 3, 4]);
    assert_eq!(parse_degrees("1,3").unwrap(), vec![1, 3]);
    assert_eq!(parse_degrees("2").unwrap(), vec![2]);
    assert!(parse_degrees("3..1").is_err());
    assert!(parse_degrees("a").is_err());
}
