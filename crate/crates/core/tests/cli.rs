use serde_json::Value;

use gt_systems::cli::{run, Report};

fn gtsys(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("gtsys").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = gtsys(args);
    assert_eq!(code, 0, "stderr: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn invariants_degree_seven() {
    let v = json(&["invariants", "--d", "7", "--action", "0,1,3"]);
    let gens: Vec<&str> = v["results"]["generators"].as_array().unwrap().iter().map(|g| g["display"].as_str().unwrap()).collect();
    assert_eq!(gens.len(), 6);
    for m in ["x^7", "x^4yz^2", "x^2y^4z"] {
        assert!(gens.contains(&m), "{m} missing from {gens:?}");
    }
}

#[test]
fn invalid_inputs_exit_one() {
    assert_eq!(gtsys(&["classify", "--d", "842", "--action", "0,1,0"]).0, 1);
    assert_eq!(gtsys(&["invariants", "--d", "6", "--action", "0,2,4"]).0, 1);
    assert_eq!(gtsys(&["invariants", "--d", "7", "--action", "0,1"]).0, 1);
    assert_eq!(gtsys(&["circulant", "--d", "10", "--coeff", "0,0,0,0,1,21,1,3,6,8"]).0, 1);
    let (code, _, err) = gtsys(&["frobnicate"]);
    assert_eq!(code, 1);
    assert!(err.contains("Usage"));
}

#[test]
fn circulant_coefficient() {
    let v = json(&["circulant", "--d", "6", "--coeff", "0,0,1,3,3,5"]);
    assert_eq!(v["results"]["coefficient"], 0);
    let v = json(&["circulant", "--d", "3"]);
    assert_eq!(v["results"]["determinant"], "v0^3 - 3v0v1v2 + v1^3 + v2^3");
}

#[test]
fn classify_markdown_rows() {
    let (code, out, _) = gtsys(&["classify", "--d", "13", "--format", "md"]);
    assert_eq!(code, 0);
    for row in ["(2,7,12)", "(4,10)", "(3,5,6,8,9,11)"] {
        assert!(out.contains(row), "{row} missing");
    }
}

#[test]
fn classify_reports_formula_findings() {
    let v = json(&["classify", "--d", "7"]);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["name"] == "formula_N22" && c["status"] == "finding"));
    assert!(checks.iter().all(|c| c["status"] != "fail"));
}

#[test]
fn verdict_json() {
    let v = json(&["gt-verdict", "--d", "7", "--action", "0,1,3", "--format", "json"]);
    let verdict = &v["results"]["verdict"];
    assert_eq!(verdict["is_gt"], true);
    assert_eq!(verdict["kernel_dim"], 1);
    assert_eq!(verdict["rank"], verdict["rank_direct"]);
}

#[test]
fn scan_has_empty_findings() {
    let (code, out, _) = gtsys(&["conjecture-scan", "--dmax", "9"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"findings\": []"));
}

#[test]
fn scan_streams_lines() {
    let (code, out, _) = gtsys(&["conjecture-scan", "--dmax", "7", "--stream"]);
    assert_eq!(code, 0);
    let lines: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(lines.len() > 2);
    assert_eq!(lines.last().unwrap()["command"], "conjecture-scan");
    assert_eq!(lines[0]["d"], 3);
}

#[test]
fn surface_json_fields() {
    let v = json(&["surface", "--d", "9", "--format", "json"]);
    let r = &v["results"];
    assert_eq!(r["degree"], 9);
    assert_eq!(r["smooth"], true);
    assert_eq!(r["generators"].as_array().unwrap().len(), 7);
    assert!(!r["betti"].as_array().unwrap().is_empty());
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}

#[test]
fn arrangement_outputs() {
    let v = json(&["arrangement", "--type", "hd", "--d", "4"]);
    assert_eq!(v["results"]["exponents"], serde_json::json!([9, 9]));
    assert_eq!(v["results"]["lines"], 19);
    let v = json(&["arrangement", "--type", "hd", "--d", "5"]);
    assert_eq!(v["results"]["exponents"], "necessary condition fails");
    let v = json(&["arrangement", "--type", "fermat", "--d", "3"]);
    assert_eq!(v["results"]["exponents"], serde_json::json!([4, 4]));
}

#[test]
fn bundled_report() {
    let v = json(&["report", "--d", "11", "--a", "3"]);
    let r = &v["results"];
    assert_eq!(r["invariants"]["mu"], 8);
    assert_eq!(r["gt_verdict"]["verdict"]["is_gt"], true);
    assert_eq!(r["minimality"]["circulant"]["minimal"], true);
    assert_eq!(r["class"]["size"], 6);
    assert_eq!(r["surface"]["degree"], 11);
}

#[test]
fn output_is_deterministic_and_round_trips() {
    let args = ["report", "--d", "8", "--action", "0,1,5", "--seed", "7"];
    let (_, a, _) = gtsys(&args);
    let (_, b, _) = gtsys(&args);
    assert_eq!(a, b);
    let parsed: Report = serde_json::from_str(&a).unwrap();
    assert_eq!(serde_json::to_string_pretty(&parsed).unwrap() + "\n", a);
}

#[test]
fn csv_and_out_file() {
    let dir = std::env::temp_dir().join(format!("gtsys-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("census.csv");
    let (code, out, _) = gtsys(&["arrangement", "--type", "fermat", "--d", "4", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("mult,count\n3,16\n4,3\n"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn help_goes_to_stdout() {
    let (code, out, _) = gtsys(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("conjecture-scan"));
}
