use std::path::PathBuf;

use critorbit::cli::{run_with, EXIT_COMPUTATION, EXIT_OK, EXIT_VALIDATION};
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with(std::iter::once("critorbit").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("schemas/{name}.schema.json"));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&doc).unwrap()
}

fn json_ok(args: &[&str], schema_name: &str) -> Value {
    let (code, out, err) = call(args);
    assert_eq!(code, EXIT_OK, "{args:?}: {err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    let validator = schema(schema_name);
    let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{args:?} against {schema_name}: {errors:?}");
    v
}

#[test]
fn every_report_matches_its_schema() {
    let d = json_ok(&["density-scan", "--poly", "x3+5", "--bound", "5000", "--modulus", "3"], "density_report");
    assert_eq!(d["primes_scanned"], 669);
    json_ok(&["density-scan", "--poly", "0,0,1", "--bound", "2"], "density_report");
    json_ok(&["cheb-scan", "--poly", "x2+1", "--m", "2", "--bound", "2000"], "chebotarev_report");
    let c = json_ok(
        &["cheb-scan", "--poly", "x3+5", "--m", "1", "--bound", "2000", "--compare", "--workers", "2"],
        "cheb_compare",
    );
    assert_eq!(c["consistent"], true);
    json_ok(&["fpp", "--d", "2", "--n", "20"], "fpp_table");
    json_ok(&["fpp", "--d", "3", "--n", "3", "--samples", "500", "--seed", "9"], "monte_carlo");
    json_ok(&["disc-check", "--poly", "x2+1", "--n", "1", "--alpha", "-1/2"], "disc_check");
    json_ok(&["newton", "--poly", "-6,0,0,-3/2,1", "--p", "2"], "newton_polygon");
    let h = json_ok(&["hypotheses", "--d", "4", "--m", "3", "--b", "3/2", "--x0", "6", "--p", "2"], "hypotheses");
    assert_eq!(h["report"]["all_hold"], true);
    let h = json_ok(&["hypotheses", "--d", "4", "--m", "3", "--b", "0", "--x0", "6", "--p", "2"], "hypotheses");
    assert_eq!(h["report"]["v_b"], "inf");
    assert_eq!(h["predicted_segments"], Value::Null);
    let s = json_ok(&["construct", "--d", "6", "--p", "3", "--q", "5"], "construct");
    assert_eq!(s["audit"]["polygon_matches_prediction"], true);
    json_ok(&["eisenstein-tower", "--d", "3", "--n", "2", "--p", "3", "--polynomials"], "eisenstein_tower");
    json_ok(&["certify-sd", "--poly", "-1,-1,0,1", "--bound", "100"], "sd_certificate");
    let f = json_ok(&["common-prime", "--poly", "x2+1", "--poly", "x3+5", "--bound", "1000"], "common_prime");
    assert_eq!(f["prime"], 7);
    json_ok(&["common-prime", "--poly", "0,0,1", "--bound", "100"], "common_prime");
    json_ok(&["tree-shape", "--d", "3", "--n", "4"], "tree_shape");
}

#[test]
fn density_csv_columns() {
    let (code, out, _) = call(&["density-scan", "--poly", "x2+1", "--bound", "100", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["prime", "good", "attracting", "which_critical_point", "tail", "cycle"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 25);
    assert_eq!(&rows[0][1], "0");
    assert_eq!(rows[2].iter().take(3).collect::<Vec<_>>(), ["5", "1", "1"]);
}

#[test]
fn fpp_csv_rows() {
    let (code, out, _) = call(&["fpp", "--d", "2", "--n", "5", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        ["n", "q_n", "fpp_iter", "fpp_product", "bound_2_over_n_plus_2", "fpp_iter_decimal"]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 6);
    assert_eq!(&rows[1][1], "1/2");
    assert_eq!(&rows[2][1], "5/8");
}

#[test]
fn seeded_monte_carlo_is_reproducible() {
    let args = ["fpp", "--d", "4", "--n", "3", "--samples", "2000", "--seed", "77"];
    assert_eq!(call(&args).1, call(&args).1);
    let other = ["fpp", "--d", "4", "--n", "3", "--samples", "2000", "--seed", "78"];
    assert_ne!(call(&args).1, call(&other).1);
}

#[test]
fn validation_errors_name_the_field() {
    for (args, field) in [
        (&["density-scan", "--poly", "1,a", "--bound", "10"][..], "--poly"),
        (&["newton", "--poly", "1,0,1", "--p", "9"][..], "--p"),
        (&["construct", "--d", "4", "--p", "2", "--q", "8"][..], "--q"),
        (&["hypotheses", "--d", "4", "--m", "3", "--b", "1/0", "--x0", "6", "--p", "2"][..], "--b"),
        (&["density-scan", "--poly", "x2+1", "--bound", "10", "--workers", "0"][..], "--workers"),
        (&["newton", "--poly", "1,0,1", "--p", "2", "--format", "csv"][..], "--format"),
        (&["fpp", "--d", "13", "--n", "1"][..], "--d"),
        (&["density-scan", "--bound", "10"][..], "--poly"),
    ] {
        let (code, _, err) = call(args);
        assert_eq!(code, EXIT_VALIDATION, "{args:?}");
        assert!(err.contains(field), "{args:?}: {err}");
    }
}

#[test]
fn computation_errors() {
    for args in [
        &["density-scan", "--poly", "0,1,0,1", "--bound", "10"][..],
        &["cheb-scan", "--poly", "0,0,1", "--m", "2", "--bound", "10"][..],
        &["construct", "--d", "5", "--p", "2", "--q", "3"][..],
        &["eisenstein-tower", "--d", "3", "--n", "2", "--p", "2"][..],
        &["newton", "--poly", "0,0,1", "--p", "2"][..],
    ] {
        let (code, _, err) = call(args);
        assert_eq!(code, EXIT_COMPUTATION, "{args:?}");
        assert!(err.starts_with("error:"));
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_critorbit");
    let ok = std::process::Command::new(bin)
        .args(["tree-shape", "--d", "2", "--n", "3"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = std::process::Command::new(bin).args(["tree-shape", "--d", "x"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let failed = std::process::Command::new(bin)
        .args(["newton", "--poly", "0,0,1", "--p", "2"])
        .output()
        .unwrap();
    assert_eq!(failed.status.code(), Some(2));
}
