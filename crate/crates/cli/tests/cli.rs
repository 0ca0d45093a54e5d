use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn khtor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_khtor")).args(args).env_remove("KHTOR_MAX_CROSSINGS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn pd_file(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("khtor-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn cell(rows: &Value, h: i64, q: i64) -> Option<&Value> {
    rows.as_array().unwrap().iter().find(|r| r["h"] == h && r["q"] == q)
}

#[test]
fn table_of_mirror_six_one() {
    let o = khtor(&["table", "--builtin", "mirror6_1_D25"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("p = 2, n = 5"));
    assert!(text.contains("Z+Z2"));
    let rows = json(&khtor(&["table", "--builtin", "mirror6_1_D25", "--format", "json"]));
    let at = |i: i64, j: i64| rows.as_array().unwrap().iter().find(|r| r["i"] == i && r["j"] == j).cloned();
    assert_eq!(at(2, 1).unwrap()["torsion"], serde_json::json!([2]));
    assert_eq!(at(4, 5).unwrap()["free_rank"], 1);
    assert_eq!(at(6, 9).unwrap()["torsion"], serde_json::json!([]));
}

#[test]
fn table_of_unknot_file() {
    let path = pd_file("unknot.pd", "circle\n");
    let rows = json(&khtor(&["table", "--pd", path.to_str().unwrap(), "--format", "json"]));
    assert_eq!(rows.as_array().unwrap().len(), 2);
    for q in [-1, 1] {
        let c = cell(&rows, 0, q).unwrap();
        assert_eq!((c["free_rank"].as_u64(), c["torsion"].as_array().unwrap().len()), (Some(1), 0));
    }
}

#[test]
fn insertion_example_entry() {
    let rows = json(&khtor(&["table", "--builtin", "11n61_insertion", "--format", "json"]));
    let c = cell(&rows, -2, -1).unwrap();
    assert_eq!(c["free_rank"], 1);
    assert_eq!(c["torsion"], serde_json::json!([2]));
}

#[test]
fn mod2_table_has_no_torsion_column_entries() {
    let rows = json(&khtor(&["table", "--builtin", "trefoil_D22", "--format", "json", "--mod2"]));
    assert!(rows.as_array().unwrap().iter().all(|r| r["torsion"].as_array().unwrap().is_empty()));
}

#[test]
fn detect_bipartite_links() {
    for name in ["whitehead", "borromean"] {
        let rows = json(&khtor(&["detect", "--builtin", name, "--format", "json"]));
        let rows = rows.as_array().unwrap();
        assert!(rows.iter().any(|r| r["bipartite"] == true), "{name}");
        assert!(rows.iter().all(|r| !r["predicted"].as_array().unwrap().is_empty()));
    }
}

#[test]
fn detect_nothing_on_small_unknot() {
    let path = pd_file("two_crossing_unknot.pd", "X(2,4,1,1) X(3,3,2,4)\n");
    let o = khtor(&["detect", "--pd", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("no D(g,h) pattern"));
    let rows = json(&khtor(&["detect", "--pd", path.to_str().unwrap(), "--format", "json"]));
    assert_eq!(rows, serde_json::json!([]));
}

#[test]
fn certify_trefoil() {
    let o = khtor(&["certify", "--builtin", "trefoil_D22", "--r", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let cert = json(&o);
    assert_eq!(cert["chain_v"].as_array().unwrap().len(), 4);
    assert_eq!(cert["chain_x"].as_array().unwrap().len(), 4);
    assert!(cert["checks"].as_object().unwrap().values().all(|v| v == true));
}

#[test]
fn certify_mirror_six_one() {
    let cert = json(&khtor(&["certify", "--builtin", "mirror6_1_D25", "--r", "3", "--format", "json"]));
    assert_eq!(cert["bidegree"], serde_json::json!([4, 5]));
    let o = khtor(&["certify", "--builtin", "mirror6_1_D25", "--r", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("r < h"));
    assert_eq!(khtor(&["certify", "--builtin", "mirror6_1_D25", "--r", "2"]).status.code(), Some(1));
}

#[test]
fn input_errors_exit_with_one() {
    assert_eq!(khtor(&["table", "--builtin", "nope"]).status.code(), Some(1));
    let bad = pd_file("bad.pd", "X(1,2,3)\n");
    assert_eq!(khtor(&["table", "--pd", bad.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(khtor(&["table", "--builtin", "mirror6_1_D25", "--max-crossings", "4"]).status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_khtor"))
        .args(["table", "--builtin", "mirror6_1_D25"])
        .env("KHTOR_MAX_CROSSINGS", "4")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(khtor(&["certify", "--pd", "/nonexistent.pd", "--r", "1"]).status.code(), Some(1));
}

#[test]
fn selftest_with_small_guard_skips() {
    let o = khtor(&["selftest", "--max-crossings", "4", "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with('[')).count(), 10);
    assert!(text.contains("SKIP"));
    assert!(!text.contains("FAIL"));
}
