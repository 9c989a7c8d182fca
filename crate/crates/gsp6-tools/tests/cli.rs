use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn gsp6(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsp6"))
        .args(args)
        .env_remove("GSP6_REPORT")
        .env_remove("GSP6_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

#[test]
fn dim_of_trivial_and_large() {
    let o = gsp6(&["dim", "c3", "0", "0", "0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1");
    assert_eq!(stdout(&gsp6(&["dim", "c3", "9", "6", "2"])).trim(), "237600");
    assert_eq!(stdout(&gsp6(&["dim", "c2", "2", "1"])).trim(), "16");
}

#[test]
fn region_ascii_has_fifteen_points() {
    let o = gsp6(&["region", "9", "6", "2", "--ascii"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let body: String = s.lines().skip(1).collect();
    assert_eq!(body.matches('*').count(), 15);
    assert!(s.contains("k in [1, 3, 5]"));
}

#[test]
fn region_svg_is_well_formed() {
    let s = stdout(&gsp6(&["region", "9", "6", "2", "--svg"]));
    let doc = roxmltree::Document::parse(&s).expect("well-formed XML");
    let circles = doc.descendants().filter(|n| n.has_tag_name("circle")).count();
    assert_eq!(circles, 15);
    assert_eq!(doc.root_element().tag_name().name(), "svg");
}

#[test]
fn region_json_matches_counts() {
    let v = json(&gsp6(&["region", "9", "6", "2", "--json"]));
    assert_eq!(v["points"].as_array().unwrap().len(), 15);
}

#[test]
fn hwvec_check_x() {
    let o = gsp6(&["hwvec", "--check", "X", "--json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["highest"], Value::Bool(true));
    assert_eq!(v["weight"], "(0,0,0) det^1");
}

#[test]
fn limits_report_sign_pattern() {
    let v = json(&gsp6(&["limits", "X", "--json"]));
    let computed: Vec<&str> = v["sign_report"].as_array().unwrap().iter().map(|t| t["computed"].as_str().unwrap()).collect();
    let reference: Vec<&str> = v["sign_report"].as_array().unwrap().iter().map(|t| t["reference"].as_str().unwrap()).collect();
    assert_eq!(computed, ["-2", "-1"]);
    assert_eq!(reference, ["2", "-1"]);
    assert_eq!(v["strict_equality"], Value::Bool(false));
}

#[test]
fn levels_describes_pattern() {
    let v = json(&gsp6(&["levels", "--spec", "Kprime n=6 m=1 p=2", "--json"]));
    assert_eq!(v["required_precision"], 6);
    assert_eq!(v["closed"], Value::Bool(true));
    // Mod 2, K is the stabilizer of a nonzero vector in Sp6(F_2), of order
    // 1451520 / 63, and K0 has the unipotent image of order 8.
    let v = json(&gsp6(&["levels", "--spec", "K n=2 p=2", "--index", "K0 n=2 p=2", "--json"]));
    assert_eq!(v["index"]["value"], 1451520 / 63 / 8);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["dim"][..],
        &["dim", "c3", "0", "1", "0"],
        &["dim", "g2", "1", "0"],
        &["--p", "4", "dim", "c3", "1", "0", "0"],
        &["--big-n", "99", "dim", "c3", "1", "0", "0"],
        &["verify", "--n", "4"],
        &["verify", "--only", "13"],
        &["levels", "--spec", "nonsense"],
        &["frobnicate"],
    ] {
        let o = gsp6(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn fault_injection_is_detected() {
    let o = gsp6(&["verify", "--only", "5", "--fault", "flip-x-prime", "--allow-known-gaps", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    let c = &v["checks"][0];
    assert_eq!(c["id"], 5);
    assert_eq!(c["status"], "fail");
    assert!(!c["witnesses"].as_array().unwrap().is_empty());
    assert_eq!(v["unexpected_failures"], serde_json::json!([5]));

    let clean = gsp6(&["verify", "--only", "5", "--json"]);
    assert!(clean.status.success());
}

#[test]
fn known_gap_policy() {
    let strict = gsp6(&["verify", "--only", "4", "--json"]);
    assert_eq!(strict.status.code(), Some(1));
    let v = json(&strict);
    assert_eq!(v["checks"][0]["known_gap"], Value::Bool(true));
    assert_eq!(v["unexpected_failures"], serde_json::json!([]));
    let lenient = gsp6(&["verify", "--only", "4", "--allow-known-gaps"]);
    assert!(lenient.status.success());
}

#[test]
fn verify_is_deterministic_and_round_trips() {
    let args = ["verify", "--only", "1,2,3,5,6,11,12", "--seed", "7", "--trials", "500", "--json"];
    let a = json(&gsp6(&args));
    let b = json(&gsp6(&args));
    assert_eq!(gsp6_tools::verify::without_timings(&a), gsp6_tools::verify::without_timings(&b));
    assert_eq!(a["schema_version"], 1);
    assert_eq!(a["config"]["seed"], 7);
    assert_eq!(a["checks"].as_array().unwrap().len(), 7);
    let again: Value = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
    assert_eq!(a, again);
}

#[test]
fn report_file_and_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"seed": 3, "trials": 200, "p": 3}"#).unwrap();
    let report = dir.path().join("out.json");
    let env_report = dir.path().join("env.json");
    let o = Command::new(env!("CARGO_BIN_EXE_gsp6"))
        .args(["--config", cfg.to_str().unwrap(), "--seed", "5", "verify", "--only", "1", "--json"])
        .env("GSP6_REPORT", &env_report)
        .env("GSP6_THREADS", "2")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&env_report).unwrap()).unwrap();
    assert_eq!(v["config"]["seed"], 5);
    assert_eq!(v["config"]["p"], 3);
    assert_eq!(v["config"]["trials"], 200);
    assert_eq!(v["config"]["threads"], 2);

    let o = Command::new(env!("CARGO_BIN_EXE_gsp6"))
        .args(["--config", cfg.to_str().unwrap(), "--report", report.to_str().unwrap(), "verify", "--only", "1"])
        .env("GSP6_REPORT", &env_report)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(Path::new(&report).exists());
    assert!(stdout(&o).starts_with("PASS  1"));

    std::fs::write(&cfg, r#"{"seed": 3, "bogus": 1}"#).unwrap();
    let o = gsp6(&["--config", cfg.to_str().unwrap(), "dim", "c3", "1", "0", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn text_and_json_carry_the_same_fields() {
    let v = json(&gsp6(&["branch", "1", "1", "0", "--json"]));
    let t = stdout(&gsp6(&["branch", "1", "1", "0"]));
    for key in v.as_object().unwrap().keys() {
        assert!(t.contains(&format!("{key}:")), "{key} missing from text output");
    }
}

#[test]
fn hecke_dump_layout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("reps.bin");
    let o = gsp6(&["hecke", "--dump", path.to_str().unwrap(), "--json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["size_K"], 4096);
    assert_eq!(v["size_Kprime"], 4096);
    assert_eq!(v["control_size"], 7680);
    let bytes = std::fs::read(&path).unwrap();
    assert_eq!(&bytes[..8], gsp6_tools::commands::DUMP_MAGIC);
    let count = u32::from_le_bytes(bytes[24..28].try_into().unwrap()) as usize;
    assert_eq!(count, 4096);
    assert_eq!(bytes.len(), 28 + count * 36 * 8);
}
