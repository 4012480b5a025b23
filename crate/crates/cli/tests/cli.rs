use std::process::{Command, Output};

fn fhchain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fhchain")).args(args).env_remove("FHCHAIN_QUAD_POINTS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV record, split into fields.
fn rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn identity_sweep() {
    let o = fhchain(&["det", "--symbol", "identity", "--n", "1..8"]);
    assert!(o.status.success());
    let r = rows(&o);
    assert_eq!(r.len(), 8);
    for row in r {
        assert!((row[1].parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn half_filling_pi_symbol_vanishes_at_odd_sizes() {
    let o = fhchain(&["det", "--symbol", "xx-jump", "--alpha", "pi", "--pf", "0.5pi", "--n", "1..16"]);
    assert!(o.status.success());
    for row in rows(&o) {
        let n: usize = row[0].parse().unwrap();
        let m = row[1].parse::<f64>().unwrap().hypot(row[2].parse().unwrap());
        if n % 2 == 1 {
            assert!(m < 1e-10, "N = {n}: {m}");
        } else {
            assert!(m > 1e-3);
        }
    }
}

#[test]
fn long_range_order_determinant() {
    let o = fhchain(&["det", "--symbol", "xy-f1", "--gamma", "0.5", "--h", "0.5", "--n", "200", "--format", "json"]);
    assert!(o.status.success());
    let d = json(&o)["outputs"][0]["det_re"].as_f64().unwrap();
    assert!((d - 4.0 * 0.21943).abs() < 4e-3);
}

#[test]
fn asym_reports_two_degenerate_terms_for_pi_symbol() {
    let o = fhchain(&["asym", "--symbol", "xx-jump", "--alpha", "pi", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["metadata"]["terms"], 2);
    let selected: Vec<&serde_json::Value> =
        v["outputs"].as_array().unwrap().iter().filter(|r| r["selected"] == true).collect();
    assert_eq!(selected.len(), 2);
    for r in selected {
        assert_eq!(r["exponent_re"].as_f64().unwrap(), -0.5);
    }
}

#[test]
fn asym_inner_boundary_for_high_field_f2() {
    let o = fhchain(&["asym", "--symbol", "xy-f2", "--gamma", "0.5", "--h", "1.2", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["metadata"]["terms"], 1);
    let t = &v["outputs"][0];
    assert!((t["exponent_re"].as_f64().unwrap() + 1.5).abs() < 1e-12);
    let lambda2 = (1.2 + (1.2f64 * 1.2 + 0.25 - 1.0).sqrt()) / 1.5;
    assert!((t["l0_re"].as_f64().unwrap() + lambda2.ln()).abs() < 1e-10);
    assert!(t["singularities"].as_str().unwrap().contains("a=-0.25 b=1.25"));
}

#[test]
fn smooth_symbol_gives_one_szego_term() {
    let o = fhchain(&["asym", "--symbol", "factors=(0.4,z,-0.5),(0.4,1/z,-0.5)", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["metadata"]["terms"], 1);
    let e = v["outputs"][0]["e_re"].as_f64().unwrap();
    assert!((e - (1.0f64 - 0.16).powf(-0.25)).abs() < 1e-12);
}

#[test]
fn compare_critical_line_exponent() {
    let o = fhchain(&[
        "compare", "--kind", "gyy", "--gamma", "0.5", "--h", "1", "--x", "32,64,128,256", "--against", "closed", "--tol",
        "0.03", "--format", "json",
    ]);
    assert!(o.status.success());
    let v = json(&o);
    assert!((v["metadata"]["fitted_exponent"].as_f64().unwrap() + 2.25).abs() < 0.03);
}

#[test]
fn compare_exit_code_reflects_tolerance() {
    let ok = fhchain(&["compare", "--kind", "gxx", "--gamma", "0.5", "--h", "0.5", "--x", "25,50,100,200", "--tol", "1e-3"]);
    assert_eq!(ok.status.code(), Some(0));
    let tight = fhchain(&["compare", "--kind", "gpm", "--pf", "pi/3", "--x", "16", "--tol", "1e-9"]);
    assert_eq!(tight.status.code(), Some(1));
}

#[test]
fn specfun_values() {
    let o = fhchain(&["specfun", "barnes-g", "4", "--format", "json"]);
    assert!((json(&o)["outputs"][0]["re"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    let o = fhchain(&["specfun", "g-tilde", "0", "--format", "json"]);
    assert_eq!(json(&o)["outputs"][0]["re"].as_f64().unwrap(), 1.0);
    let o = fhchain(&["specfun", "g-cross-check", "0.5", "--format", "json"]);
    let v = json(&o);
    for r in v["outputs"].as_array().unwrap() {
        if r["quantity"].as_str().unwrap().starts_with("residual") {
            assert!(r["re"].as_f64().unwrap() < 1e-8);
        }
    }
}

#[test]
fn csv_and_json_agree() {
    let args = ["det", "--symbol", "xx-jump", "--alpha", "0.5pi", "--pf", "1.1", "--n", "1..6"];
    let csv = fhchain(&args);
    let js = fhchain(&[&args[..], &["--format", "json"]].concat());
    let j = json(&js);
    for (row, obj) in rows(&csv).iter().zip(j["outputs"].as_array().unwrap()) {
        assert_eq!(row[1].parse::<f64>().unwrap(), obj["det_re"].as_f64().unwrap());
        assert_eq!(row[2].parse::<f64>().unwrap(), obj["det_im"].as_f64().unwrap());
        assert_eq!(row[3].parse::<f64>().unwrap(), obj["log_abs"].as_f64().unwrap());
    }
}

#[test]
fn reruns_are_bit_identical() {
    let args = ["det", "--symbol", "xy-f2", "--gamma", "0.3", "--h", "0.7", "--n", "1..12"];
    assert_eq!(fhchain(&args).stdout, fhchain(&args).stdout);
}

#[test]
fn structural_zero_prints_zero() {
    // c_{-1} = c_0 = c_1 = 1 gives a singular 2×2 matrix of ones
    let o = fhchain(&["det", "--symbol", "const=1;factors=(1,z,1)", "--n", "1", "--format", "json"]);
    assert!(o.status.success());
    let o = fhchain(&["det", "--symbol", "jumps=(0.5pi,-0.5i),(-0.5pi,0.5i)", "--n", "1..3", "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn quadrature_default_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_fhchain"))
        .args(["coeffs", "--symbol", "identity", "--n", "1", "--format", "json"])
        .env("FHCHAIN_QUAD_POINTS", "1024")
        .output()
        .unwrap();
    assert_eq!(json(&o)["metadata"]["quad_points"], 1024);
}

#[test]
fn parse_errors_are_usage_errors_with_position() {
    let o = fhchain(&["det", "--symbol", "factors=(0.5,w,1)", "--n", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("position 14") && err.contains('^'));
    let o = fhchain(&["det", "--symbol", "identity", "--n", "0..3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numeric_failures_exit_one() {
    let o = fhchain(&["det", "--symbol", "jumps=(0,0.3)", "--n", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let o = fhchain(&["specfun", "barnes-g", "-2"]);
    assert_eq!(o.status.code(), Some(1));
}
