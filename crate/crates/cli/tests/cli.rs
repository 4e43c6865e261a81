use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn chiral(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chiral"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

struct Corpus {
    dir: TempDir,
}

impl Corpus {
    fn new() -> Self {
        let dir = TempDir::new().unwrap();
        let out = chiral(&["corpus", "write", "--dir", dir.path().to_str().unwrap()]);
        assert_eq!(code(&out), 0);
        Corpus { dir }
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).to_string_lossy().into_owned()
    }

    fn files(&self) -> Vec<PathBuf> {
        let mut v: Vec<PathBuf> = std::fs::read_dir(self.dir.path())
            .unwrap()
            .map(|e| e.unwrap().path())
            .collect();
        v.sort();
        v
    }
}

#[test]
fn validate_accepts_z2() {
    let c = Corpus::new();
    let out = chiral(&["validate", "--input", &c.path("z2.json")]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["valid"], true);
}

#[test]
fn validate_reports_associativity_witness() {
    let out = chiral(&["validate", "--input", &data("invalid/nonassociative.json")]);
    assert_eq!(code(&out), 1);
    let v = stdout_json(&out);
    let first = &v["semigroup"]["violations"][0]["witness"];
    assert_eq!(first["kind"], "not_associative");
    assert_eq!((first["i"].as_u64(), first["j"].as_u64(), first["k"].as_u64()), (Some(1), Some(1), Some(2)));
}

#[test]
fn validate_reports_normalization_witness() {
    let c = Corpus::new();
    let out = chiral(&[
        "validate",
        "--input",
        &c.path("z2.json"),
        "--twist",
        &data("invalid/z2.unnormalized.twist.json"),
    ]);
    assert_eq!(code(&out), 1);
    let v = stdout_json(&out);
    let w = &v["twist"]["violations"][0]["witness"];
    assert_eq!(w["kind"], "normalization");
    assert_eq!(w["idempotent"], 0);
}

#[test]
fn parse_errors_name_the_field() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"elements": ["a", "b"], "table": [[0, 1]], "star": [0, 1]}"#).unwrap();
    let out = chiral(&["validate", "--input", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("table"));
}

#[test]
fn every_corpus_file_validates() {
    let c = Corpus::new();
    for f in c.files() {
        let name = f.file_name().unwrap().to_string_lossy().into_owned();
        if name.contains(".twist.") {
            let base = c.path(&format!("{}.json", name.split('.').next().unwrap()));
            let out = chiral(&["validate", "--input", &base, "--twist", f.to_str().unwrap()]);
            assert_eq!(code(&out), 0, "{name}");
        } else {
            let out = chiral(&["validate", "--input", f.to_str().unwrap()]);
            assert_eq!(code(&out), 0, "{name}");
        }
    }
}

#[test]
fn build_stats_lines() {
    let c = Corpus::new();
    let stats = |file: &str, which: &str| {
        let out = chiral(&["build", "--input", &c.path(file), "--which", which, "--format", "text"]);
        assert_eq!(code(&out), 0);
        String::from_utf8(out.stdout).unwrap().lines().next().unwrap().to_string()
    };
    assert_eq!(stats("z2.json", "universal"), "1 unit, 2 arrows, bisections verified");
    assert_eq!(stats("z2.json", "germ"), "2 units, 4 arrows, bisections verified");
    assert_eq!(stats("i1.json", "universal"), "2 units, 2 arrows, bisections verified");
}

#[test]
fn build_exports_json_and_dot() {
    let c = Corpus::new();
    let out = chiral(&["build", "--input", &c.path("b2.json")]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["format"], 1);
    assert_eq!(v["order"], "paper");
    assert_eq!(v["arrows"].as_array().unwrap().len(), 5);
    let out = chiral(&["build", "--input", &c.path("b2.json"), "--format", "dot"]);
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("// format: 1\ndigraph"));
}

#[test]
fn untwisted_z2_has_inversion_witness() {
    let c = Corpus::new();
    let out = chiral(&["chirality", "--input", &c.path("z2.json"), "--level", "groupoid"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["chiral"], false);
    assert_eq!(v["interpretation"], "v1");
    // In Z/2 every arrow is its own inverse.
    assert_eq!(v["witness"]["arrow_map"], serde_json::json!([0, 1]));
    assert_eq!(v["algebra"]["witness_pullback"]["passed"], true);
}

#[test]
fn decorated_left_zero_is_chiral() {
    let c = Corpus::new();
    let out = chiral(&["chirality", "--input", &c.path("l2-decorated.json"), "--level", "semigroup"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["chiral"], true);
    assert_eq!(v["index"], serde_json::json!([0, 1]));
    assert_eq!(v["mir_count"], 0);
    assert!(v["certificate"]["log_hash"].is_string());
}

#[test]
fn carry_twist_on_z3_is_chiral_with_certificate() {
    let c = Corpus::new();
    let out = chiral(&[
        "chirality",
        "--input",
        &c.path("z3.json"),
        "--twist",
        &c.path("z3.carry.twist.json"),
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["chiral"], true);
    assert!(v["witness"].is_null());
    assert!(v["certificate"]["search_nodes"].as_u64().unwrap() > 0);
}

#[test]
fn weights_table_is_used() {
    let c = Corpus::new();
    let dir = TempDir::new().unwrap();
    let w = dir.path().join("w.json");
    // Z/3 untwisted: the identity and the inversion are the two mirror maps.
    std::fs::write(&w, r#"{"u:0|a:0,1,2": [1, 3], "u:0|a:0,2,1": [1, 6]}"#).unwrap();
    let out = chiral(&[
        "chirality",
        "--input",
        &c.path("z3.json"),
        "--weights",
        w.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out)["index"], serde_json::json!([1, 2]));

    std::fs::write(&w, r#"{"u:0|a:0,1,2": [1, 3]}"#).unwrap();
    let out = chiral(&["chirality", "--input", &c.path("z3.json"), "--weights", w.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("no weight"));
}

#[test]
fn bridge_passes_on_i1_and_twisted_z2() {
    let c = Corpus::new();
    let out = chiral(&["bridge", "--input", &c.path("i1.json")]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["stages"].as_array().unwrap().len(), 10);
    let out = chiral(&["bridge", "--input", &c.path("z2.json"), "--twist", &c.path("z2.sign.twist.json")]);
    assert_eq!(code(&out), 0);
}

#[test]
fn bridge_with_invalid_twist_fails() {
    let c = Corpus::new();
    let out = chiral(&[
        "bridge",
        "--input",
        &c.path("z2.json"),
        "--twist",
        &data("invalid/z2.unnormalized.twist.json"),
        "--format",
        "text",
    ]);
    assert_eq!(code(&out), 1);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("twist validation: FAILED"));
    assert!(text.contains("algebra check: skipped"));
}

#[test]
fn algebra_reports_sign_twist() {
    let c = Corpus::new();
    let out = chiral(&["algebra", "--input", &c.path("z2.json"), "--twist", &c.path("z2.sign.twist.json")]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["verified"], true);
    // δ_a·δ_a = −δ_e
    let mult = v["algebra"]["mult"].as_array().unwrap();
    assert!(mult.contains(&serde_json::json!([1, 1, 0, [1, 2]])));
    assert_eq!(v["opposite"]["reversed_twist_equal"], true);
}

#[test]
fn export_mirror_and_characters() {
    let c = Corpus::new();
    let out = chiral(&["export", "--input", &c.path("i2.json"), "--object", "mirror"]);
    assert_eq!(code(&out), 0);
    let m = stdout_json(&out);
    let orig = stdout_json(&chiral(&["export", "--input", &c.path("i2.json"), "--object", "semigroup"]));
    let (t, mt) = (orig["table"].as_array().unwrap(), m["table"].as_array().unwrap());
    for i in 0..t.len() {
        for j in 0..t.len() {
            assert_eq!(t[i][j], mt[j][i]);
        }
    }
    let out = chiral(&["export", "--input", &c.path("chain2.json"), "--object", "characters"]);
    assert_eq!(stdout_json(&out)["characters"].as_array().unwrap().len(), 2);
    let out = chiral(&["export", "--input", &c.path("i1.json"), "--object", "mirror-representation"]);
    assert_eq!(stdout_json(&out)["coincides_with_original"], true);
}

#[test]
fn output_is_deterministic() {
    let c = Corpus::new();
    let args = ["bridge", "--input", &c.path("s3.json"), "--threads", "3"];
    let a = chiral(&args);
    let b = chiral(&["bridge", "--input", &c.path("s3.json"), "--threads", "1"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let f1 = chiral(&["fuzz", "--input", &c.path("b2.json"), "--seed", "11", "--rounds", "40"]);
    let f2 = chiral(&["fuzz", "--input", &c.path("b2.json"), "--seed", "11", "--rounds", "40"]);
    assert_eq!(code(&f1), 0);
    assert_eq!(f1.stdout, f2.stdout);
    assert_eq!(stdout_json(&f1)["inconsistent"], serde_json::json!([]));
}

#[test]
fn usage_errors_exit_two() {
    let c = Corpus::new();
    assert_eq!(code(&chiral(&["validate"])), 2);
    assert_eq!(code(&chiral(&["frobnicate"])), 2);
    let out = chiral(&["chirality", "--input", &c.path("z2.json"), "--format", "dot"]);
    assert_eq!(code(&out), 2);
    let out = chiral(&["validate", "--input", &c.path("z2.json"), "--threads", "0"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn missing_file_exits_one() {
    let out = chiral(&["validate", "--input", "/nonexistent/z.json"]);
    assert_eq!(code(&out), 1);
}
