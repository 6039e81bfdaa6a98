use std::path::{Path, PathBuf};
use std::process::Command;

use gevrey_cli::{run_with, EXIT_INPUT, EXIT_NUMERIC, EXIT_OK};
use gevrey_core::dsl::ProblemSpec;
use gevrey_core::flow::flow_recurrence;
use gevrey_core::series::json::tseries_from_json;
use serde_json::Value;

fn problems() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/problems")
}

fn problem(name: &str) -> String {
    problems().join(format!("{name}.json")).display().to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("gevrey").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap_or_else(|e| panic!("{e}: {text}"))
}

fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

#[test]
fn flow_output_roundtrips_and_is_deterministic() {
    let heat = problem("heat");
    let (code, first, _) = run(&["flow", "--problem", &heat]);
    assert_eq!(code, EXIT_OK);
    let (_, second, _) = run(&["flow", "--problem", &heat]);
    assert_eq!(first, second);

    let expected = flow_recurrence(&ProblemSpec::from_json(&std::fs::read_to_string(&heat).unwrap()).unwrap()).unwrap();
    assert_eq!(tseries_from_json(&first).unwrap(), expected.series);
    let v = json(&first);
    assert_eq!(v["s"], 2);
    assert_eq!(v["K"], 12);
    assert_eq!(v["method"], "recurrence");
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("flow.json");
    let (code, stdout, _) = run(&["flow", "--problem", &problem("exp"), "--out", target.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(stdout.is_empty());
    let (_, direct, _) = run(&["flow", "--problem", &problem("exp")]);
    assert_eq!(std::fs::read_to_string(target).unwrap(), direct);
}

#[test]
fn negative_rationals_are_canonical() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        &dir,
        "neg.json",
        r#"{"space_vars":["z"],"components":["u"],"field":["-3/6*u"],"initial":["1"],"order_t":2,"trunc_deg":0}"#,
    );
    let (code, out, err) = run(&["flow", "--problem", &p]);
    assert_eq!(code, EXIT_OK, "{err}");
    // v_1 = -1/2, v_2 = 1/8
    assert!(out.contains("\"-1/2\""), "{out}");
    assert!(out.contains("\"1/8\""), "{out}");
    assert!(!out.contains("-3/6"));
}

#[test]
fn methods_agree_through_the_cli() {
    let p = problem("linear-system");
    let (_, rec, _) = run(&["flow", "--problem", &p, "--method", "recurrence"]);
    let (code, exp, _) = run(&["flow", "--problem", &p, "--method", "linear_exp"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(tseries_from_json(&rec).unwrap(), tseries_from_json(&exp).unwrap());
    let (code, _, err) = run(&["flow", "--problem", &problem("burgers"), "--method", "linear_exp"]);
    assert_eq!(code, EXIT_INPUT, "{err}");
}

#[test]
fn gevrey_report_from_flow_file() {
    let dir = tempfile::tempdir().unwrap();
    let flow = dir.path().join("heat.json");
    run(&["flow", "--problem", &problem("heat"), "--out", flow.to_str().unwrap()]);
    let (code, out, _) = run(&["gevrey", "--coeffs", flow.to_str().unwrap(), "--mode", "abs_at_origin", "--s", "2", "--window", "6:12"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["values"][4], "1680/1");
    let table = v["minR_table"].as_array().unwrap();
    assert_eq!(table.len(), 2);
    assert_eq!(table[0]["R"], "divergent");
    let r2 = table[1]["R_approx"].as_f64().unwrap();
    assert!((3.0..=4.5).contains(&r2), "{r2}");
    assert!(v["s_hat"].as_f64().is_some());

    let (code, _, err) = run(&["gevrey", "--coeffs", flow.to_str().unwrap(), "--s", "1", "--window", "6:12", "--strict"]);
    assert_eq!(code, EXIT_NUMERIC, "{err}");
    let (code, _, _) = run(&["gevrey", "--coeffs", flow.to_str().unwrap(), "--s", "2", "--window", "6:12", "--strict"]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn gevrey_input_errors() {
    let heat = problem("heat");
    for args in [
        vec!["gevrey", "--problem", heat.as_str(), "--window", "6-12"],
        vec!["gevrey", "--problem", heat.as_str(), "--mode", "sup_norm"],
        vec!["gevrey", "--problem", heat.as_str(), "--window", "6:40"],
        vec!["gevrey", "--problem", heat.as_str(), "--mode", "max_coeff(40)"],
        vec!["gevrey"],
    ] {
        let (code, _, err) = run(&args);
        assert_eq!(code, EXIT_INPUT, "{args:?}: {err}");
        assert!(!err.is_empty());
    }
}

#[test]
fn problem_validation() {
    let dir = tempfile::tempdir().unwrap();
    let kdv = write(
        &dir,
        "kdv.json",
        r#"{"space_vars":["z"],"components":["u"],"field":["D(u,[3]) + u*D(u,[1])"],"initial":["inv(1-z^2)"],"order_t":10,"trunc_deg":20}"#,
    );
    let (code, _, err) = run(&["flow", "--problem", &kdv]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("20") && err.contains("30"), "{err}");

    let unknown = write(
        &dir,
        "unknown.json",
        r#"{"space_vars":["z"],"components":["u"],"field":["u + v"],"initial":["1"],"order_t":1,"trunc_deg":1}"#,
    );
    let (code, _, err) = run(&["flow", "--problem", &unknown]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("`v`") && err.contains("position 4"), "{err}");

    let broken = write(&dir, "broken.json", "{\"space_vars\": [\"z\"],\n \"components\": ");
    let (code, _, err) = run(&["flow", "--problem", &broken]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("line 2"), "{err}");

    let (code, _, _) = run(&["flow", "--problem", &problem("heat"), "--trunc-deg", "10"]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn laplace_values_and_errors() {
    let (code, out, _) = run(&["laplace", "--w", "10,0", "--angle", "0.7853981633974483"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["branch"], "lower");
    assert_eq!(v["path"]["kind"], "ray");
    let up = v["value"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect::<Vec<_>>();
    assert!(v["est_error"].as_f64().unwrap() < 1e-8);

    let (_, out, _) = run(&["laplace", "--w", "10", "--angle", "-0.7853981633974483"]);
    let down = json(&out)["value"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect::<Vec<_>>();
    // real w: the two rays are complex conjugates
    assert!((up[0] - down[0]).abs() < 1e-9 && (up[1] + down[1]).abs() < 1e-9);

    let (code, out, _) = run(&["laplace", "--w", "10,0", "--path", "cut"]);
    assert_eq!(code, EXIT_OK);
    let a = json(&out)["value"][1].as_f64().unwrap();
    let closed = -0.5 * (std::f64::consts::PI / 10.0).sqrt() * (-2.5f64).exp();
    assert!((a - closed).abs() < 1e-9 * closed.abs());

    let (code, out, _) = run(&["laplace", "--w", "10,0", "--winding", "1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out)["path"]["kind"], "winding");

    let (code, _, _) = run(&["laplace", "--w", "10,0", "--angle", "0"]);
    assert_eq!(code, EXIT_INPUT);
    let (code, _, _) = run(&["laplace", "--w", "ten"]);
    assert_eq!(code, EXIT_INPUT);
    // decays along no part of the ray
    let (code, _, err) = run(&["laplace", "--w", "-10,0", "--angle", "0.5"]);
    assert_eq!(code, EXIT_NUMERIC, "{err}");
}

#[test]
fn borel_check_and_demos() {
    let (code, out, _) = run(&["borel-check"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["central_binomials"][4], "70/1");

    let (code, out, _) = run(&["demo", "kovalevskaia"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["name"], "kovalevskaia");
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    assert_eq!(v["data"]["sequence"][3], "120/1");

    let (code, _, _) = run(&["demo", "nope"]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn usage_errors_exit_two() {
    for args in [vec!["bogus"], vec!["flow"], vec!["laplace"], vec!["gevrey", "--coeffs", "a", "--problem", "b"]] {
        let (code, _, err) = run(&args);
        assert_eq!(code, EXIT_INPUT, "{args:?}");
        assert!(!err.is_empty());
    }
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("laplace"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_gevrey");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let ok = status(&["borel-check", "--order-t", "4"]);
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("\"pass\": true"));
    assert_eq!(status(&["flow", "--problem", "/does/not/exist.json"]).status.code(), Some(EXIT_INPUT));
    assert_eq!(status(&["laplace", "--w", "-1,0"]).status.code(), Some(EXIT_NUMERIC));
}
