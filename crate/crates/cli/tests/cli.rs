use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn mvop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mvop"))
        .args(args)
        .env("MVOP_LOG", "quiet")
        .output()
        .expect("binary runs")
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Writes the Darboux-transformed operator for `lambda` and the given seed.
fn transformed(dir: &TempDir, lambda: &str, alpha0: &str, levels: usize) -> PathBuf {
    let l0 = dir.path().join(format!("l0_{alpha0}"));
    let l = dir.path().join(format!("l_{alpha0}"));
    let levels = levels.to_string();
    let out = mvop(&["gegenbauer-operator", "--lambda", lambda, "--levels", &levels, "--out", p(&l0)]);
    assert!(out.status.success(), "{}", stderr(&out));
    let out = mvop(&["darboux", p(&l0), p(&data(alpha0)), "--out", p(&l)]);
    assert!(out.status.success(), "{}", stderr(&out));
    l
}

#[test]
fn moments_relative_starts_at_identity() {
    let out = mvop(&["moments", p(&data("gegenbauer_5_2.json")), "--count", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v["normalization"], "relative");
    assert_eq!(v["mus"].as_array().unwrap().len(), 4);
    assert_eq!(v["mus"][0], serde_json::json!([["1", "0"], ["0", "1"]]));
}

#[test]
fn moments_with_endpoint_masses() {
    let out = mvop(&["moments", p(&data("jacobi_masses.json")), "--count", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v["mus"][0], serde_json::json!([["4", "2"], ["2", "4"]]));
    assert_eq!(v["mus"][1], serde_json::json!([["0", "2/3"], ["2/3", "0"]]));
}

#[test]
fn moments_of_transformed_weight() {
    let out = mvop(&["moments", p(&data("identity_seed_weight.json")), "--count", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v["mus"][0], serde_json::json!([["4/3", "0"], ["0", "4/3"]]));
    assert_eq!(v["mus"][1], serde_json::json!([["4/3", "0"], ["0", "4/3"]]));
}

#[test]
fn inexact_absolute_moments_exit_two() {
    let out = mvop(&["moments", p(&data("gegenbauer_1.json")), "--count", "2", "--normalization", "absolute"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error[InexactParameters]"), "{}", stderr(&out));
}

#[test]
fn delta_sign_rejected_for_plain_weights() {
    let out = mvop(&["moments", p(&data("gegenbauer_5_2.json")), "--count", "2", "--delta-sign", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error[Usage]"));
}

#[test]
fn darboux_identity_seed() {
    let dir = TempDir::new().unwrap();
    let l = transformed(&dir, "5/2", "identity_alpha0.json", 4);
    let v = read(&l);
    let text = v.to_string();
    assert!(text.contains(r#"[["1","0"],["0","1"]]"#), "{text}");
    assert!(text.contains(r#"[["0","1/5"],["1/5","0"]]"#), "{text}");
}

#[test]
fn darboux_emits_factors() {
    let dir = TempDir::new().unwrap();
    let l0 = dir.path().join("l0.json");
    let factors = dir.path().join("factors.json");
    mvop(&["gegenbauer-operator", "--lambda", "5/2", "--levels", "5", "--out", p(&l0)]);
    let out = mvop(&["darboux", p(&l0), p(&data("example1_alpha0.json")), "--factors", p(&factors)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(read(&factors).is_object());
    assert!(json_stdout(&out).is_object());
}

#[test]
fn darboux_singular_pivot() {
    let dir = TempDir::new().unwrap();
    let l0 = dir.path().join("l0.json");
    mvop(&["gegenbauer-operator", "--lambda", "5/2", "--levels", "4", "--out", p(&l0)]);
    let b0 = read(&l0)["diag"][0].clone();
    let seed = dir.path().join("b0.json");
    std::fs::write(&seed, b0.to_string()).unwrap();
    let out = mvop(&["darboux", p(&l0), p(&seed)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error[SingularPivot]"), "{}", stderr(&out));
}

#[test]
fn verify_example_bundles() {
    let dir = TempDir::new().unwrap();
    for (lambda, k) in [("5/2", 1), ("7/2", 2)] {
        let l = transformed(&dir, lambda, &format!("example{k}_alpha0.json"), 14);
        let report = dir.path().join(format!("report{k}.json"));
        let out = mvop(&[
            "verify",
            p(&l),
            p(&data(&format!("example{k}_operator.json"))),
            p(&data(&format!("example{k}_eigen.json"))),
            "--n",
            "12",
            "--report",
            p(&report),
        ]);
        assert_eq!(out.status.code(), Some(0), "example {k}: {}", stderr(&out));
        let r = read(&report);
        assert_eq!(r["pass"], true);
        assert_eq!(r["details"], serde_json::json!([]));
        assert_eq!(r["meta"]["inputs_hash"].as_str().unwrap().len(), 64);
    }
}

#[test]
fn verify_zeroed_eigenvalues_fails_at_zero() {
    let dir = TempDir::new().unwrap();
    let l = transformed(&dir, "5/2", "example1_alpha0.json", 12);
    let zero = dir.path().join("zero.json");
    std::fs::write(&zero, r#"{"poly_in_n": [[["0"], ["0"]], [["0"], ["0"]]]}"#).unwrap();
    let out = mvop(&["verify", p(&l), p(&data("example1_operator.json")), p(&zero)]);
    assert_eq!(out.status.code(), Some(1));
    let r = json_stdout(&out);
    assert_eq!(r["pass"], false);
    assert!(r["details"][0]["location"].as_str().unwrap().starts_with("n = 0"), "{r}");
}

#[test]
fn search_reports_minimal_order() {
    let dir = TempDir::new().unwrap();
    let l = transformed(&dir, "5/2", "example1_alpha0.json", 20);
    let report = dir.path().join("search.json");
    let basis = dir.path().join("basis.json");
    let out = mvop(&["search", p(&l), "--max-order", "4", "--report", p(&report), "--out", p(&basis)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.contains("minimal nontrivial order: 4"), "{table}");
    let r = read(&report);
    assert_eq!(r["result"]["dims"], serde_json::json!([1, 1, 1, 1, 2]));
    assert_eq!(read(&basis).as_array().unwrap().len(), 2);
}

#[test]
fn search_needs_enough_levels() {
    let dir = TempDir::new().unwrap();
    let l = transformed(&dir, "5/2", "example1_alpha0.json", 10);
    let out = mvop(&["search", p(&l), "--max-order", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error[InsufficientLevels]"));
}

#[test]
fn construct_then_verify_round_trip() {
    let dir = TempDir::new().unwrap();
    let l = transformed(&dir, "5/2", "example1_alpha0.json", 12);
    let built = dir.path().join("built.json");
    let eigen = data("example1_eigen.json");
    let out = mvop(&["construct", p(&l), p(&eigen), "--order", "4", "--out", p(&built)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let mut expected = read(&data("example1_operator.json"));
    expected.as_object_mut().unwrap().remove("comment");
    assert_eq!(read(&built), expected);
    let out = mvop(&["verify", p(&l), p(&built), p(&eigen)]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn adcheck_and_intertwine() {
    let dir = TempDir::new().unwrap();
    let l0 = dir.path().join("l0.json");
    let l = dir.path().join("l.json");
    let beta = dir.path().join("beta.json");
    mvop(&["gegenbauer-operator", "--lambda", "5/2", "--levels", "12", "--out", p(&l0)]);
    let out = mvop(&["darboux", p(&l0), p(&data("example1_alpha0.json")), "--out", p(&l), "--beta-out", p(&beta)]);
    assert_eq!(out.status.code(), Some(0));
    let eigen = data("example1_eigen.json");
    assert_eq!(mvop(&["adcheck", p(&l), p(&eigen), "--power", "5"]).status.code(), Some(0));
    let out = mvop(&["adcheck", p(&l), p(&eigen), "--power", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_stdout(&out)["pass"], false);
    assert_eq!(mvop(&["intertwine", p(&beta), p(&l0), p(&l)]).status.code(), Some(0));
    let out = mvop(&["intertwine", p(&beta), p(&l0), p(&l0)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn recurrence_matches_darboux() {
    let dir = TempDir::new().unwrap();
    let via_darboux = transformed(&dir, "5/2", "identity_alpha0.json", 5);
    let via_moments = dir.path().join("rec.json");
    let out = mvop(&["recurrence", p(&data("identity_seed_weight.json")), "--levels", "5", "--out", p(&via_moments)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(read(&via_moments), read(&via_darboux));
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = transformed(&dir, "7/2", "example2_alpha0.json", 8);
    let first = std::fs::read(&a).unwrap();
    let b = transformed(&dir, "7/2", "example2_alpha0.json", 8);
    assert_eq!(first, std::fs::read(&b).unwrap());
    let (op, eigen) = (data("example2_operator.json"), data("example2_eigen.json"));
    let args = ["verify", p(&a), p(&op), p(&eigen), "--n", "6"];
    assert_eq!(mvop(&args).stdout, mvop(&args).stdout);
}

#[test]
fn missing_file_is_io_error() {
    let out = mvop(&["moments", "/nonexistent/weight.json", "--count", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error[Io]"));
}
