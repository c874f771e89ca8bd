use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(f: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", f].iter().collect();
    p.to_string_lossy().into_owned()
}

fn cptd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cptd")).args(args).output().expect("runs")
}

fn json(args: &[&str]) -> Value {
    let out = cptd(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn temp_json(v: &Value) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    write!(f, "{v}").unwrap();
    f
}

#[test]
fn check_accepts_fixtures() {
    for f in ["walk2.json", "comp-uv.json", "disk-a.json", "pathcat.json", "z5.json", "kan1.json", "comp.json", "collapse.json"] {
        let v = json(&["check", &data(f)]);
        assert_eq!(v["valid"], true, "{f}");
    }
    assert_eq!(json(&["check", &data("walk2.json")])["kind"], "computad");
    assert_eq!(json(&["check", &data("comp-uv.json")])["kind"], "term");
}

#[test]
fn boundary_of_the_composite() {
    let v = json(&["boundary", "--face", "s", "--term", &data("comp-uv.json")]);
    assert_eq!(v, serde_json::json!({"var": "p"}));
    let v = json(&["boundary", "--face", "t", "--term", r#"{"var":"u"}"#, "--computad", &data("walk2.json")]);
    assert_eq!(v, serde_json::json!({"var": "q"}));
}

#[test]
fn plexes_of_arrows() {
    let v = json(&["plexes", "--sig", &data("comp.json"), "--sort", "a", "--max-depth", "1"]);
    assert_eq!(v.as_array().unwrap().len(), 2);
    let v = json(&["plexes", "--sig", &data("comp.json"), "--sort", "a", "--max-depth", "2"]);
    assert_eq!(v.as_array().unwrap().len(), 5);
}

#[test]
fn enumerate_classify_nerve() {
    let v = json(&["enumerate", "--computad", &data("walk2.json"), "--sort", "a", "--depth", "2"]);
    assert_eq!(v["count"], 3);
    let c = json(&["classify", "--term", &data("comp-uv.json")]);
    assert_eq!(c["app"]["symbol"], "comp");
    let n = json(&["nerve", "--computad", &data("walk2.json")]);
    assert_eq!(n["fibres"].as_array().unwrap().len(), 2);
}

#[test]
fn morphisms_factor_and_split() {
    let f = json(&["factorize", "--morphism", &data("composite.json")]);
    assert_eq!(f["epi"], true);
    let s = json(&["support", "--morphism", &data("collapse.json")]);
    assert_eq!(s["full"], false);
    assert_eq!(s["support"]["a"], serde_json::json!(["u"]));
    let sp = json(&["split", "--morphism", &data("collapse.json")]);
    assert_eq!(sp["object"]["generators"]["a"], serde_json::json!(["u"]));
    let out = cptd(&["split", "--morphism", &data("composite.json")]);
    assert_eq!(out.status.code(), Some(1));
    let img = json(&["apply", "--morphism", &data("composite.json"), "--term", r#"{"var":"h"}"#]);
    assert_eq!(img["app"]["symbol"], "comp");
}

#[test]
fn emitted_json_reloads() {
    let f = json(&["factorize", "--morphism", &data("composite.json")]);
    for key in ["pi", "middle", "iota"] {
        let tmp = temp_json(&f[key]);
        let back = json(&["check", tmp.path().to_str().unwrap()]);
        assert_eq!(back["valid"], true, "{key}");
    }
    for args in [&["example", "kan", "--dim", "2"][..], &["example", "grid", "--counts", "4,1"], &["example", "cat", "--tree", "[[][][]]"], &["example", "module"]] {
        let sig = json(args);
        let tmp = temp_json(&sig);
        assert_eq!(json(&["check", tmp.path().to_str().unwrap()])["kind"], "signature");
    }
    let und = json(&["cofrep", "--algebra", &data("pathcat.json"), "--depth", "2"]);
    assert_eq!(und["exact"], true);
    let tmp = temp_json(&und["computad"]);
    assert_eq!(json(&["check", tmp.path().to_str().unwrap()])["summary"]["generators"], 9);
}

#[test]
fn algebra_commands() {
    let term = r#"{"app":{"symbol":"comp","args":[{"cell":"f","term":{"var":"a"}},{"cell":"g","term":{"var":"b"}},{"cell":"x","term":{"var":"0"}},{"cell":"y","term":{"var":"1"}},{"cell":"z","term":{"var":"2"}}]}}"#;
    assert_eq!(json(&["eval", "--algebra", &data("pathcat.json"), "--term", term])["value"], "ab");
    let t = json(&["check-tfib", "--algebra", &data("z5.json"), "--depth", "1"]);
    assert_eq!(t["trivial_fibration"], true);
    let f = json(&["filtration", "--computad", &data("walk2.json")]);
    assert_eq!(f["replay"]["isomorphic"], true);
    assert_eq!(f["stages"].as_array().unwrap().len(), 2);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["enumerate", "--computad", &data("walk2.json"), "--sort", "a", "--depth", "2"][..],
        &["nerve", "--computad", &data("walk2.json")],
        &["cofrep", "--algebra", &data("pathcat.json"), "--depth", "2"],
        &["example", "grid", "--counts", "2,2"],
    ] {
        assert_eq!(cptd(args).stdout, cptd(args).stdout, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(cptd(&["check", "/no/such/file.json"]).status.code(), Some(2));
    assert_eq!(cptd(&["boundary", "--term", &data("comp-uv.json")]).status.code(), Some(2));
    assert_eq!(cptd(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(cptd(&["boundary", "--face", "s", "--term", r#"{"var":"u"}"#]).status.code(), Some(2));
    let mut bad: Value = serde_json::from_str(&std::fs::read_to_string(data("walk2.json")).unwrap()).unwrap();
    bad["gluing"][0]["term"] = serde_json::json!({"var": "nowhere"});
    let tmp = temp_json(&bad);
    let out = cptd(&["check", tmp.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nowhere"));
    assert_eq!(cptd(&["boundary", "--face", "zz", "--term", &data("comp-uv.json")]).status.code(), Some(1));
    assert_eq!(cptd(&["example", "kan", "--dim", "0"]).status.code(), Some(1));
}
