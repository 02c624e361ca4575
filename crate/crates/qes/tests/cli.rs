use std::fs;
use std::process::{Command, Output};

fn qes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qes")).args(args).output().expect("qes runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn figures_are_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        assert_eq!(code(&qes(&["figures", "--out-dir", d.path().to_str().unwrap()])), 0);
    }
    let mut names: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.iter().any(|n| n == "manifest.json"));
    for n in &names {
        assert_eq!(fs::read(a.path().join(n)).unwrap(), fs::read(b.path().join(n)).unwrap(), "{n:?}");
    }
    let manifest = fs::read_to_string(a.path().join("manifest.json")).unwrap();
    assert!(manifest.contains("artifact-chosen"));
}

#[test]
fn table_writes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.json");
    let o = qes(&[
        "table", "--quantity", "potential", "--class", "III", "--k", "3", "--tau", "5", "--b", "2",
        "--format", "json", "--points", "5", "--spacing", "linear", "--rho-min", "0.5", "--rho-max", "2.5",
        "--output", path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["columns"][1], "potential");
    assert_eq!(v["rows"].as_array().unwrap().len(), 5);
    assert_eq!(v["rows"][2][0], 1.5);
}

#[test]
fn bad_table_spec_is_usage_error() {
    let o = qes(&[
        "table", "--quantity", "density", "--class", "I", "--k", "3", "--tau", "4", "--b", "1", "--points", "1",
    ]);
    assert_eq!(code(&o), 1);
}

#[test]
fn verify_exit_codes() {
    let o = qes(&["verify", "--all"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 9);
    assert!(v.as_array().unwrap().iter().all(|r| r["convention"] == "Chain"));

    let o = qes(&["verify", "--class", "II", "--k", "3", "--tau", "4", "--b", "1", "--perturb-potential", "0.01"]);
    assert_eq!(code(&o), 4);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["passed"], false);

    assert_eq!(code(&qes(&["verify", "--all", "--class", "I"])), 1);
    assert_eq!(code(&qes(&["verify", "--class", "I"])), 1);
}

#[test]
fn normalize_and_tcs() {
    let o = qes(&["normalize", "--class", "III", "--k", "3", "--tau", "5", "--b", "2"]);
    assert_eq!(code(&o), 0);
    let first = String::from_utf8(o.stdout).unwrap();
    let value: f64 = first.split_whitespace().next().unwrap().parse().unwrap();
    assert!(value > 0.0);

    let o = qes(&["tcs", "--N", "2", "--lambda", "1", "--r", "1", "--s", "0", "--k", "2", "--b", "1"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["tau"], 3.0);
    assert_eq!(v["classes"][0]["class_regular"], true);

    assert_eq!(code(&qes(&["tcs", "--N", "3", "--lambda", "0", "--r", "1", "--k", "2", "--b", "1"])), 1);
}
