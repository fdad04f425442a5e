use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_periodpoly"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

#[test]
fn dims_level_100() {
    let o = run(&["dims", "--level", "100", "--weight", "6"]);
    assert!(o.status.success());
    let v = stdout(&o);
    assert_eq!(v["dim_w_plus"], 78);
    assert_eq!(v["dim_w_minus"], 72);
    assert_eq!(v["dim_s"], 66);
    assert_eq!(v["index"], 180);
    // progress goes to stderr only
    assert!(!o.stderr.is_empty());
}

#[test]
fn dims_with_character() {
    let all = stdout(&run(&["dims", "--group", "gamma1", "--level", "5", "--weight", "3"]));
    let mut total = 0;
    for i in 0..4 {
        let v = stdout(&run(&["dims", "--group", "gamma1", "--level", "5", "--weight", "3", "--character", &i.to_string()]));
        total += v["dim_w"].as_u64().unwrap();
    }
    assert_eq!(total, all["dim_w"].as_u64().unwrap());
    let o = run(&["dims", "--level", "5", "--weight", "4", "--character", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eigenvalue_level_5() {
    let o = run(&["eigenvalue", "--level", "5", "--weight", "4", "--n", "2", "--eigen", "2:-4"]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "-4");
    let o = run(&["eigenvalue", "--level", "5", "--weight", "4", "--n", "13", "--eigen", "2:-4"]);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "-38");
}

#[test]
fn petersson_level_5() {
    let form = data("gamma0_5_k4_eta.json");
    let o = run(&["petersson", "--form", form.to_str().unwrap(), "--level", "5", "--weight", "4", "--eigen", "2:-4"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout(&o);
    let ff = v["petersson"]["re"].as_f64().unwrap();
    assert!((ff - 0.00014513335).abs() < 1e-9, "{ff}");
    let o = run(&["petersson", "--form", form.to_str().unwrap(), "--level", "7", "--eigen", "2:-4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eigenpoly_round_trip_and_determinism() {
    let dir = std::env::temp_dir().join(format!("periodpoly-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    for p in [&a, &b] {
        let o = run(&["eigenpoly", "--level", "5", "--weight", "4", "--sign", "plus", "--eigen", "2:-4", "--output", p.to_str().unwrap()]);
        assert!(o.status.success());
    }
    let text = std::fs::read(&a).unwrap();
    assert_eq!(text, std::fs::read(&b).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&text).unwrap();
    assert_eq!(v["values"]["(0:1)"], serde_json::json!(["1", "0", "-5"]));
    let o = run(&["eigenvalue", "--level", "5", "--weight", "4", "--n", "3", "--poly", a.to_str().unwrap()]);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "2");
    std::fs::write(&b, "{ not json").unwrap();
    let o = run(&["eigenvalue", "--level", "5", "--weight", "4", "--n", "3", "--poly", b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn eigenpoly_infeasible_data() {
    let o = run(&["eigenpoly", "--level", "5", "--weight", "4", "--sign", "plus", "--eigen", "2:7"]);
    assert_eq!(o.status.code(), Some(4));
    let o = run(&["eigenpoly", "--level", "5", "--weight", "4", "--sign", "plus"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn hecke_element_and_matrix() {
    let o = run(&["hecke-element", "--n", "5"]);
    assert!(o.status.success());
    let v = stdout(&o);
    assert_eq!(v["check"]["holds"], true);
    let again = run(&["hecke-element", "--n", "5"]);
    assert_eq!(o.stdout, again.stdout);
    let o = run(&["hecke-element", "--n", "5", "--bound", "2"]);
    assert_ne!(o.status.code(), Some(0));
    let o = run(&["hecke-matrix", "--level", "1", "--weight", "12", "--n", "2"]);
    assert_eq!(stdout(&o)["trace"], "2001");
    let o = run(&["hecke-matrix", "--level", "2", "--weight", "8", "--n", "2", "--sigma", "theta"]);
    assert!(o.status.success());
}

#[test]
fn cusps_listing() {
    let v = stdout(&run(&["cusps", "--level", "6", "--weight", "2"]));
    assert_eq!(v["count"], 4);
    let widths: u64 = v["cusps"].as_array().unwrap().iter().map(|c| c["width"].as_u64().unwrap()).sum();
    assert_eq!(widths, 12);
}

#[test]
fn lvalues_and_relations() {
    let form = data("gamma0_2_k8_eta.json");
    let o = run(&["lvalue", "--form", form.to_str().unwrap(), "--s", "4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o)["lambda"].as_array().unwrap().len(), 1);
    let o = run(&["lvalue", "--form", form.to_str().unwrap(), "--s", "9"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["gamma02-relations", "--form", form.to_str().unwrap(), "--json"]);
    assert!(o.status.success());
    for row in stdout(&o)["rows"].as_array().unwrap() {
        assert!(row["rel_residual"].as_f64().unwrap() < 1e-6);
    }
    let five = data("gamma0_5_k4_eta.json");
    let o = run(&["gamma02-relations", "--form", five.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn demos() {
    let o = run(&["gamma06-demo"]);
    assert!(o.status.success());
    let o = run(&["gamma06-demo", "--case", "fulllevel:12"]);
    assert!(o.status.success());
    let o = run(&["gamma06-demo", "--case", "gamma07"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_subset_and_usage_errors() {
    let o = run(&["verify", "--only", "1,gamma02.dim-u"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let text = String::from_utf8_lossy(&o.stdout);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 2);
    assert_eq!(run(&["verify", "--only", "99"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["dims", "--level", "5"]).status.code(), Some(2));
    assert_eq!(run(&["dims", "--group", "gamma9", "--level", "5", "--weight", "4"]).status.code(), Some(2));
}
