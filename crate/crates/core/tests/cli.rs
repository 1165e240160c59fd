use std::process::{Command, Output};

use veelab::report::{CheckReport, Verdict};

fn veelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_veelab")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> CheckReport {
    serde_json::from_slice(&out.stdout).expect("report JSON")
}

#[test]
fn f4_on_locus_passes() {
    let out = veelab(&["check", "F4+", "--set", "r=-2", "--set", "q=1", "--points", "20", "--seed", "7", "--tol", "1e-8", "--json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report.schema, 1);
    assert_eq!(report.verdict, Verdict::Pass);
    assert!(report.check("commute").unwrap().residual < 1e-9);
    assert_eq!(report.points.len(), 20);
}

#[test]
fn f4_off_locus_fails_commute_but_not_vee() {
    let out = veelab(&["check", "F4+", "--set", "r=1", "--set", "q=1"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL commute"));
    let out = veelab(&["check", "F4+", "--set", "r=1", "--set", "q=1", "--checks", "vee"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn g2_identity_routes_agree() {
    let out = veelab(&["identity", "G2+", "--set", "p=-3", "--set", "q=1", "--compare", "minors,closed", "--json"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert!(report.check("minors_vs_closed").unwrap().residual < 1e-8);
}

#[test]
fn closed_form_off_relation_is_an_error_verdict() {
    let out = veelab(&["identity", "G2+", "--set", "p=1", "--set", "q=1", "--compare", "minors,closed", "--json"]);
    assert_eq!(code(&out), 1);
    let report = json(&out);
    assert!(report.check("identity_closed").unwrap().error.is_some());
}

#[test]
fn reports_are_byte_identical() {
    let args = ["check", "BCn", "--set", "m=3,1,2", "--set", "q=1", "--set", "s=1", "--set", "r=-16", "--checks", "vee,commute,wdvv", "--json"];
    let (a, b) = (veelab(&args), veelab(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = veelab(&[&args[..], &["--seed", "8"]].concat());
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn hypothesis_warning_exits_two() {
    // G_{A,c} vanishes identically on the r = -2q locus
    let out = veelab(&["check", "F4+", "--set", "r=-2", "--set", "q=1", "--kernel", "rational", "--checks", "vee"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn unknown_target_lists_catalog() {
    let out = veelab(&["check", "E8"]);
    assert_eq!(code(&out), 1);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("F4+") && err.contains("BCn"), "{err}");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&veelab(&["check"])), 1);
    assert_eq!(code(&veelab(&["check", "F4+", "--points", "0"])), 1);
    assert_eq!(code(&veelab(&["check", "F4+", "--set", "r"])), 1);
    assert_eq!(code(&veelab(&["--help"])), 0);
}

#[test]
fn config_file_target() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b2.json");
    std::fs::write(&path, r#"{"dim": 2, "vectors": [["1","0"],["0","1"],["1","1"],["1","-1"]], "multiplicities": [1, 1, 1, 1]}"#).unwrap();
    let out = veelab(&["check", path.to_str().unwrap(), "--checks", "vee", "--json"]);
    assert_eq!(code(&out), 0);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"dim\": 2,\n  \"vectors\": [[1, 0],\n}").unwrap();
    let out = veelab(&["check", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.json:4:"));
}

#[test]
fn restrict_and_scan_verbs() {
    let out = veelab(&["restrict", "F4+", "--set", "r=-4", "--set", "q=1", "--along", "0,0,1,-1", "--json"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert!(report.check("tangent").unwrap().pass);
    let out = veelab(&["restrict", "F4+", "--set", "r=1", "--set", "q=1", "--along", "0,0,0,1"]);
    assert_eq!(code(&out), 1);

    let out = veelab(&["scan", "G2+", "--set", "q=1", "--free", "p", "--interval", "-10,-1", "--json"]);
    assert_eq!(code(&out), 0);
    let names: Vec<String> = json(&out).checks.into_iter().map(|c| c.name).collect();
    assert!(names.contains(&"root p=-9".to_string()) && names.contains(&"root p=-3".to_string()), "{names:?}");
    let out = veelab(&["scan", "G2+", "--set", "q=1", "--free", "p", "--interval", "1,5"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn catalog_verb() {
    let out = veelab(&["catalog"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    for name in veelab::catalog::NAMES {
        assert!(text.contains(name), "{name}");
    }
    let out = veelab(&["catalog", "G2+", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["name"], "G2+");
    assert_eq!(code(&veelab(&["catalog", "E8"])), 1);
}

#[test]
fn poly2d_identity() {
    let out = veelab(&["identity", "poly2d", "--json"]);
    assert_eq!(code(&out), 0);
    assert!(json(&out).check("identity_metric").unwrap().residual < 1e-10);
}
