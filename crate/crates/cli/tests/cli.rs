//! End-to-end behaviour of the `yw` binary: examples, exit codes, golden
//! files and byte-determinism.

use std::process::{Command, Output};

fn yw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_yw")).args(args).output().expect("yw runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn pyramid_summary_text_and_json() {
    let o = yw(&["pyramid", "--q", "2,2,3,1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("sigma = [[0,0,1],[2,0,1],[2,0,0]]"), "{s}");
    assert!(s.contains("p = (1,3,4)"), "{s}");
    let o = yw(&["pyramid", "--q", "2,2,3,1", "--json"]);
    assert_eq!(stdout(&o), golden("pyramid_2231.json"));
}

#[test]
fn pyramid_errors_and_single_column() {
    let o = yw(&["pyramid", "--q", "4,2,3,3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("NotUnimodal"));
    let o = yw(&["pyramid", "--q", "3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["centralizer_count"], 9);
    assert_eq!(v["sigma"], serde_json::json!([[0, 0, 0], [0, 0, 0], [0, 0, 0]]));
    // n above the height leaves the shift matrix undetermined
    assert_eq!(yw(&["pyramid", "--q", "1,2", "--n", "3"]).status.code(), Some(2));
    assert_eq!(yw(&["pyramid", "--q", "1,x"]).status.code(), Some(2));
    assert_eq!(yw(&["bogus"]).status.code(), Some(2));
}

#[test]
fn generators_table_and_cross_check() {
    let o = yw(&["generators", "--q", "1,2", "--shape", "ones", "--K", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], "yw-1");
    let d11 = v["generators"]
        .as_array()
        .unwrap()
        .iter()
        .find(|g| g["kind"] == "D" && g["a"] == 1 && g["i"] == 1 && g["j"] == 1 && g["r"] == 1)
        .unwrap();
    assert_eq!(d11["elem"], serde_json::json!({"N": 3, "terms": [{"c": "1/1", "m": [[2, 2]]}]}));
    let o = yw(&["generators", "--q", "1,2", "--K", "3"]);
    assert_eq!(stdout(&o), golden("generators_12_K3.json"));
    let o = yw(&["generators", "--q", "1,2", "--shape", "2,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("NotAdmissible"));
    let o = yw(&["generators", "--q", "2,2,1", "--shape", "minimal", "--K", "5", "--cross-check"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("0 failed"));
}

#[test]
fn verify_examples_and_negative_control() {
    let o = yw(&["verify", "--q", "1,2", "--all", "--K", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["summary"]["fail"], 0);
    let o = yw(&["verify", "--q", "2,2", "--suite", "rect", "--K", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("rect-mim"));
    let o = yw(&["verify", "--q", "1,2", "--suite", "relations", "--corrupt", "D:1:1:1:1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("FAIL r"), "{}", stderr(&o));
    // usage errors
    assert_eq!(yw(&["verify", "--q", "1,2"]).status.code(), Some(2));
    assert_eq!(yw(&["verify", "--q", "1,2", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(yw(&["verify", "--q", "1,2", "--suite", "rect"]).status.code(), Some(2));
    assert_eq!(yw(&["verify", "--q", "1,2", "--suite", "relations", "--corrupt", "E:9:1:1:1"]).status.code(), Some(2));
    assert_eq!(yw(&["verify", "--q", "1,2", "--suite", "relations", "--K", "0"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic_and_written_to_file() {
    let dir = std::env::temp_dir().join(format!("yw-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let args = |p: &std::path::Path| {
        vec!["verify", "--q", "2,2", "--suite", "rect", "--suite", "comult", "--K", "4", "--seed", "5", "--out"]
            .into_iter()
            .map(String::from)
            .chain([p.to_string_lossy().into_owned()])
            .collect::<Vec<_>>()
    };
    let run = |p: &std::path::Path| {
        let v = args(p);
        let v: Vec<&str> = v.iter().map(String::as_str).collect();
        yw(&v)
    };
    assert_eq!(run(&a).status.code(), Some(0));
    let first = std::fs::read(&a).unwrap();
    assert_eq!(run(&a).status.code(), Some(0));
    assert_eq!(std::fs::read(&a).unwrap(), first);
    assert!(String::from_utf8(first).unwrap().contains("\"schema\": \"yw-1\""));
    std::fs::remove_dir_all(&dir).unwrap();
}
