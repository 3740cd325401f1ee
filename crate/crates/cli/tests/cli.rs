use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mcmlab"))
}

fn example() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/node.toml")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("run mcmlab")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &tempfile::TempDir, text: &str) -> PathBuf {
    let p = dir.path().join("problem.toml");
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn etor_on_the_node() {
    let f = example();
    let out = run(&["etor", "--module", "M", "--filtration", "madic", "--method", "both", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["etor"], 1);
    assert_eq!(v["method_agreement"], true);
    let keys: Vec<&String> = v.as_object().unwrap().keys().take(2).collect();
    assert_eq!(keys, ["schema", "version"]);
}

#[test]
fn split_sequence_is_tsplit() {
    let f = example();
    let out = run(&["tsplit", "--sequence", "s1", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["etor_alpha"], 0);
    assert_eq!(v["tsplit"], true);
    let v = json(&run(&["tsplit", "--sequence", "ar", f.to_str().unwrap()]));
    assert_eq!(v["etor_alpha"], 2);
    assert_eq!(v["tsplit"], false);
}

#[test]
fn catalog_commands() {
    let out = run(&["catalog", "run", "quadric-a1-basics"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);
    let list = json(&run(&["catalog", "list"]));
    assert_eq!(list["scenarios"].as_array().unwrap().len(), 6);
    assert_eq!(run(&["catalog", "run", "missing"]).status.code(), Some(2));
}

#[test]
fn output_is_byte_stable() {
    let f = example();
    let args = ["validate", f.to_str().unwrap()];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    // exact integers and rationals only
    fn no_floats(v: &Value) -> bool {
        match v {
            Value::Number(n) => n.is_i64() || n.is_u64(),
            Value::Array(a) => a.iter().all(no_floats),
            Value::Object(m) => m.values().all(no_floats),
            _ => true,
        }
    }
    assert!(no_floats(&v));
}

#[test]
fn csv_tables() {
    let f = example();
    let out = run(&["--format", "csv", "--window", "0..3", "tor", "--module", "M", f.to_str().unwrap()]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "n,length\n0,1\n1,1\n2,1\n3,1\n");
    let out = run(&["--format", "csv", "betti", "--module", "P", "--max", "2", f.to_str().unwrap()]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "i,betti\n0,1\n1,1\n2,1\n");
    assert_eq!(run(&["--format", "csv", "etor", "--module", "M", f.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn failed_expectation_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        &dir,
        r#"
[ring]
vars = ["x", "y"]
relations = ["x*y"]

[modules.M]
mf = { phi = [["x"]], psi = [["y"]] }
expect = { etor = 2 }
"#,
    );
    let out = run(&["etor", "--module", "M", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["expectations"][0]["passed"], false);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(&dir, "[ring]\nvars = [\"x\", \"y\"]\nrelations = [\"x*y\"]\n\n[modules.M]\nmf = { phi = [[\"x\"]], psi = [[\"x\"]] }\n");
    let out = run(&["validate", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("problem.toml:5"), "{err}");
    let p = write(&dir, "[ring]\nvars = [\"x\"]\nrelations = [\"x^2\"]\n");
    assert_eq!(run(&["validate", p.to_str().unwrap()]).status.code(), Some(2));
    let f = example();
    assert_eq!(run(&["--field", "4", "validate", f.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["etor", "--module", "Q", f.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn other_fields_and_threads() {
    let f = example();
    for field in ["0", "7", "3"] {
        let v = json(&run(&["--field", field, "etor", "--module", "M", f.to_str().unwrap()]));
        assert_eq!(v["etor"], 1, "field {field}");
        assert_eq!(v["field"].to_string(), field);
    }
    let out = bin()
        .env("MCMLAB_THREADS", "1")
        .args(["hilbert", f.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(json(&out)["coefficients"], serde_json::json!([2, 1]));
    let out = bin().env("MCMLAB_THREADS", "zero").args(["hilbert", f.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pretty_and_intclosure() {
    let f = example();
    let out = run(&["--pretty", "intclosure", "--filtration", "ic", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("x^2*y^3"), "{text}");
    let v = json(&run(&["superficial", "--element", "x+y", "--module", "M", f.to_str().unwrap()]));
    assert_eq!(v["holds_in_window"], true);
}
