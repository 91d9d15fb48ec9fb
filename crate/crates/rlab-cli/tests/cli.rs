use rlab_cli::{run_args, Outcome, EXIT_ERROR};
use serde_json::Value;

fn rlab(args: &[&str]) -> (i32, Value) {
    let Outcome { code, output } = run_args(std::iter::once("rlab").chain(args.iter().copied()));
    let doc = serde_json::from_str(&output).unwrap_or_else(|e| panic!("{e}: {output}"));
    (code, doc)
}

fn coefficient(doc: &Value, exps: &[u64]) -> Option<(String, String)> {
    doc["terms"].as_array()?.iter().find_map(|t| {
        let e: Vec<u64> = t["exponents"].as_array()?.iter().filter_map(Value::as_u64).collect();
        (e == exps).then(|| (t["num"].as_str().unwrap().to_owned(), t["den"].as_str().unwrap().to_owned()))
    })
}

#[test]
fn single_particle_trig_series_is_one() {
    let (code, doc) = rlab(&["expand", "--N", "1"]);
    assert_eq!(code, 0);
    assert_eq!(doc["terms"], serde_json::json!([{ "exponents": [], "num": "1", "den": "1" }]));
}

#[test]
fn nonstationary_series_at_order_zero_is_one() {
    let (code, doc) = rlab(&["expand", "f_nonstat", "--N", "2", "--order", "0", "--s", "2,3", "--t", "1/3", "--kappa", "5"]);
    assert_eq!(code, 0);
    assert_eq!(doc["variables"], serde_json::json!(["z1", "z2"]));
    assert_eq!(doc["terms"].as_array().unwrap().len(), 1);
    assert_eq!(coefficient(&doc, &[0, 0]), Some(("1".into(), "1".into())));
}

#[test]
fn spectral_trig_series_truncates_to_polynomial() {
    let (code, doc) = rlab(&["expand", "--N", "2", "--lambda", "1,0", "--order", "3", "--t", "1/3"]);
    assert_eq!(code, 0);
    assert_eq!(coefficient(&doc, &[1]), Some(("1".into(), "1".into())));
    assert_eq!(coefficient(&doc, &[2]), None);
}

#[test]
fn output_is_deterministic() {
    let args = ["expand", "phi_trig", "--N", "2", "--order", "2", "--seed", "9"];
    assert_eq!(run_args(std::iter::once("rlab").chain(args)), run_args(std::iter::once("rlab").chain(args)));
}

#[test]
fn proven_checks_report_pass() {
    let (code, doc) = rlab(&["check", "euler", "macdonald", "--N", "2", "--lambda", "1,0", "--order", "2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["ok"], true);
    for c in doc["checks"].as_array().unwrap() {
        assert_eq!(c["kind"], "proven");
        assert_eq!(c["status"], "pass");
        assert!(c["first_discrepancy"].is_null());
    }
}

#[test]
fn conjecture_reports_consistent() {
    let (code, doc) = rlab(&["check", "conj4_6", "--N", "2", "--order", "2", "--strict"]);
    assert_eq!(code, 0);
    assert_eq!(doc["checks"][0]["kind"], "conjecture");
    assert_eq!(doc["checks"][0]["status"], "consistent");
}

#[test]
fn bounds_are_labelled_floating_point() {
    let (code, doc) = rlab(&["bounds", "--N", "2", "--order", "3", "--samples", "2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["float"], true);
    let rows = doc["inputs"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for r in rows {
        assert!(r["c1"].as_f64().unwrap() >= 1.0);
        assert!(r["rho_max"].as_f64().unwrap() > 0.0);
        assert_eq!(r["coefficient_violations"], 0);
    }
}

#[test]
fn bad_input_exits_with_error_object() {
    for args in [&["expand", "--N", "2", "--s", "1,2,3"][..], &["check", "no_such_identity"], &["expand", "--r", "0"]] {
        let (code, doc) = rlab(args);
        assert_eq!(code, EXIT_ERROR, "{args:?}");
        assert!(doc["error"]["kind"].is_string());
    }
    let Outcome { code, .. } = run_args(["rlab", "expand", "--t", "1/0"]);
    assert_eq!(code, 2);
}

#[test]
fn config_file_supplies_defaults() {
    let dir = std::env::temp_dir().join(format!("rlab-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.conf");
    std::fs::write(&path, "# point\nN = 2\nlambda = 1,0\norder = 3\n").unwrap();
    let (code, doc) = rlab(&["expand", "--config", path.to_str().unwrap(), "--t", "1/3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["order"], 3);
    assert_eq!(coefficient(&doc, &[1]), Some(("1".into(), "1".into())));
    std::fs::write(&path, "bogus = 1\n").unwrap();
    assert_eq!(rlab(&["expand", "--config", path.to_str().unwrap()]).0, EXIT_ERROR);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn binary_prints_json_and_sets_exit_code() {
    let bin = env!("CARGO_BIN_EXE_rlab");
    let out = std::process::Command::new(bin).args(["expand", "--N", "1", "--jobs", "1"]).output().unwrap();
    assert!(out.status.success());
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["series"], "f_trig");
    let out = std::process::Command::new(bin).args(["check", "bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_ERROR));
}
