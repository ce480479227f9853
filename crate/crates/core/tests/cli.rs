//! End-to-end runs of the command-line binary.

use std::path::Path;
use std::process::{Command, Output};

use qperceptron::TrainingSet;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qperceptron")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_then_train_then_fit() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    let out = bin(&["gen", "--n", "64", "--dim", "5", "--gamma", "0.1", "--seed", "3", "--out", s(&data)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let set = TrainingSet::load(&data).unwrap();
    assert_eq!((set.len(), set.dim()), (64, 5));
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("d.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["seed"], 3);

    for algo in ["online-quantum", "online-classical", "online-streaming", "vspace-classical"] {
        let out = bin(&["train", "--algo", algo, "--data", s(&data), "--gamma", "0.1", "--seed", "1"]);
        assert!(out.status.success(), "{algo}: {}", String::from_utf8_lossy(&out.stderr));
        let rec: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(rec["algo"], algo);
        assert_eq!(rec["N"], 64);
    }

    let spec = dir.path().join("spec.json");
    std::fs::write(
        &spec,
        r#"{"algorithm":"online-quantum","axis":"N","axis_values":[16,64,256],
            "fixed":{"N":16,"D":5,"gamma":0.2,"epsilon":0.1,"trials":4,"base_seed":9}}"#,
    )
    .unwrap();
    let csv = dir.path().join("runs.csv");
    let out = bin(&["sweep", "--spec", s(&spec), "--out", s(&csv)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("algo,axis,axis_value,trial,seed,N,D,gamma,epsilon,c,updates,converged,"));
    assert_eq!(text.lines().count(), 1 + 12);

    let out = bin(&["fit", "--in", s(&csv), "--x", "axis_value", "--y", "q_queries"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let fit: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(fit["slope"].as_f64().unwrap().is_finite());
}

#[test]
fn invalid_arguments_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    let out = bin(&["gen", "--n", "8", "--dim", "3", "--gamma", "1.5", "--out", s(&data)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(bin(&["gen", "--n", "8", "--dim", "3", "--gamma", "0.1", "--out", s(&data)]).status.success());
    let out = bin(&["train", "--algo", "nope", "--data", s(&data), "--gamma", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bin(&["train", "--algo", "online-quantum", "--data", s(&data), "--gamma", "0.1", "--epsilon", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_file_is_a_general_failure() {
    let out = bin(&["train", "--algo", "online-quantum", "--data", "/nonexistent/x.csv", "--gamma", "0.1"]);
    assert_eq!(out.status.code(), Some(1));
}
