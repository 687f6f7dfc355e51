//! End-to-end tests of the `ovx` binary: worked output values, exit codes,
//! and byte-for-byte determinism.

use std::process::Command;

use serde_json::Value;

fn ovx(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ovx"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf8 output"),
    )
}

fn term_coef<'a>(series: &'a Value, exp: &[&str]) -> Option<&'a Value> {
    series["terms"].as_array().and_then(|terms| {
        terms
            .iter()
            .find(|t| {
                t["exp"]
                    .as_array()
                    .map(|es| es.iter().map(|e| e.as_str().unwrap()).eq(exp.iter().copied()))
                    .unwrap_or(false)
            })
            .map(|t| &t["coef"])
    })
}

#[test]
fn phi_worked_example() {
    // (e^h + e^{-h})/4 = 1/2 + h^2/4 + h^4/48
    let (code, out) = ovx(&["phi", "--nu", "2", "--mu", "2", "--order", "4"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["nu"], "(2)");
    let series = &v["series"];
    assert_eq!(series["vars"], serde_json::json!(["hbar"]));
    assert_eq!(term_coef(series, &["0"]).unwrap()["coords"][0], "1/2");
    assert_eq!(term_coef(series, &["2"]).unwrap()["coords"][0], "1/4");
    assert_eq!(term_coef(series, &["4"]).unwrap()["coords"][0], "1/48");
    assert!(term_coef(series, &["1"]).is_none());
    assert!(term_coef(series, &["3"]).is_none());
}

#[test]
fn vertex_truncation_and_coefficients() {
    // zeta4 * (t^{1/2} + t^{3/2} + t^{5/2}) at t-order 3
    let (code, out) = ovx(&["vertex", "--a", "1", "--mu", "1", "--t-order", "3"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let series = &v["series"];
    assert_eq!(series["terms"].as_array().unwrap().len(), 3);
    for exp in [["1/2"], ["3/2"], ["5/2"]] {
        let coef = term_coef(series, &exp).unwrap();
        assert_eq!(coef["conductor"], 4);
        assert_eq!(coef["coords"], serde_json::json!(["0", "1"]));
    }
}

#[test]
fn orbifold_vertex_has_fractional_lattice() {
    let (code, out) = ovx(&["vertex", "--a", "2", "--mu", "3+1", "--t-order", "6"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["mu"], "(3,1)");
    let vars = v["series"]["vars"].as_array().unwrap();
    assert!(vars.iter().any(|x| x == "q1"));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["football", "--a", "2", "--b", "1", "--q-order", "2", "--order", "4"];
    let (c1, o1) = ovx(&args);
    let (c2, o2) = ovx(&args);
    assert_eq!(c1, 0);
    assert_eq!(c1, c2);
    assert_eq!(o1, o2);
}

#[test]
fn usage_errors_exit_two() {
    let (code, _) = ovx(&["phi", "--nu", "2", "--mu", "2", "--no-such-flag"]);
    assert_eq!(code, 2);
    let (code, _) = ovx(&["not-a-command"]);
    assert_eq!(code, 2);
    // bad partition text is also a usage problem
    let (code, out) = ovx(&["phi", "--nu", "x", "--mu", "2"]);
    assert_eq!(code, 2);
    assert!(out.contains("bad partition part"));
    // mismatched sizes are a domain error
    let (code, _) = ovx(&["phi", "--nu", "2", "--mu", "1"]);
    assert_eq!(code, 2);
    // sizes beyond the exact 64-bit range are rejected up front
    let (code, out) = ovx(&["partition", "--mu", "21"]);
    assert_eq!(code, 2);
    assert!(out.contains("not supported"));
}

#[test]
fn check_flags_verify_and_exit_zero() {
    let (code, _) = ovx(&[
        "football", "--a", "2", "--b", "1", "--q-order", "2", "--order", "4", "--check",
    ]);
    assert_eq!(code, 0);
    let (code, _) = ovx(&["hurwitz", "--nu", "2,1", "--mu", "3", "--r-max", "3", "--check"]);
    assert_eq!(code, 0);
}

#[test]
fn hurwitz_single_value() {
    let (code, out) = ovx(&["hurwitz", "--nu", "2", "--mu", "2", "--chi", "0"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["h"], "1/2");
}

#[test]
fn chartable_s2() {
    let (code, out) = ovx(&["chartable", "--d", "2"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["partitions"], serde_json::json!(["(2)", "(1,1)"]));
    assert_eq!(v["chi"], serde_json::json!([[1, 1], [-1, 1]]));
}

#[test]
fn partition_stats_and_text_format() {
    let (code, out) = ovx(&["partition", "--mu", "3+1"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["partition"], "(3,1)");
    assert_eq!(v["conjugate"], "(2,1,1)");
    assert_eq!(v["z"], 3);
    assert_eq!(v["kappa"], 4);

    let (code, out) = ovx(&["partition", "--mu", "3,1", "--format", "text"]);
    assert_eq!(code, 0);
    assert!(out.contains("(3,1)"));

    let (code, out) = ovx(&["partition", "--enumerate", "4"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["count"], 5);
}

#[test]
fn schur_orbifold_alphabet() {
    // s_(1) of the two-ray alphabet is (1 + q1)/(1 - t)
    let (code, out) = ovx(&[
        "schur", "--lam", "1", "--order", "2", "--alphabet", "orbifold", "--a", "2",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let series = &v["series"];
    assert_eq!(series["vars"], serde_json::json!(["t", "q1"]));
    for exp in [["0", "0"], ["0", "1"], ["1", "0"], ["1", "1"], ["2", "0"], ["2", "1"]] {
        assert_eq!(
            term_coef(series, &exp).unwrap()["coords"][0],
            "1",
            "exp {exp:?}"
        );
    }
    let (code, _) = ovx(&["schur", "--lam", "1", "--alphabet", "nonsense"]);
    assert_eq!(code, 2);
}

#[test]
fn vertex_hbar_mode_is_laurent() {
    let (code, out) = ovx(&["vertex", "--a", "1", "--mu", "1", "--hbar-order", "3"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["tau"], 0);
    let series = &v["series"];
    assert_eq!(term_coef(series, &["-1"]).unwrap()["coords"][0], "-1");
    assert_eq!(term_coef(series, &["1"]).unwrap()["coords"][0], "-1/24");
}

#[test]
fn ikv_empty_legs_is_one() {
    let (code, out) = ovx(&["ikv", "--order", "6"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let terms = v["series"]["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["coef"]["coords"][0], "1");
}

#[test]
fn conifold_log_text_mode() {
    let (code, out) = ovx(&[
        "conifold", "--q-order", "1", "--order", "2", "--log", "--format", "text",
    ]);
    assert_eq!(code, 0);
    // -Q t^{1/2} q^{1/2} (1 + t)(1 + q) truncated at total order 2
    assert!(out.contains("t^1/2*q^1/2*Q"), "got: {out}");
    assert!(out.starts_with('-'), "leading coefficient is -1: {out}");
}

#[test]
fn selfcheck_passes_end_to_end() {
    let (code, out) = ovx(&["selfcheck"]);
    assert_eq!(code, 0, "selfcheck output:\n{out}");
    assert_eq!(out.matches("[PASS]").count(), 10);
    assert!(out.contains("all criteria hold exactly"));
}

#[test]
fn in_process_runner_reports_usage_errors() {
    let outcome = orbifold_vertex::cli::run(["ovx", "--bogus"]);
    assert_eq!(outcome.code, 2);
    assert!(!outcome.output.is_empty());
}
