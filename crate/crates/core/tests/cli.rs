use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dyndrf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dyndrf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn gen_allocate_verify_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("t2.txt");
    let out = dyndrf(&["gen", "--family", "t2", "--m", "3", "--eps", "1/1000000", "--out", path(&inst)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&inst).unwrap();
    assert!(text.contains("n = 10"));

    let mut sections = Vec::new();
    for algo in ["bisect", "naive", "lp"] {
        let report = dir.path().join(format!("{algo}.json"));
        let out = dyndrf(&["allocate", "--in", path(&inst), "--algo", algo, "--out", path(&report)]);
        assert!(out.status.success());
        let v = json(&report);
        assert_eq!(v["algorithm"], algo);
        sections.push(v["steps"].clone());
    }
    assert_eq!(sections[0], sections[1]);
    assert_eq!(sections[0], sections[2]);
    let step9 = &sections[0][8];
    assert_eq!(step9["k"], 9);
    assert!(step9["shares"].as_array().unwrap().iter().all(|s| s == "50000/166667"));

    let out = dyndrf(&["verify", "--in", path(&inst)]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("ok (10 steps)"));

    let report = dir.path().join("bisect.json");
    let out = dyndrf(&["verify", "--in", path(&inst), "--report", path(&report)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn ratio_report_on_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("micro.txt");
    std::fs::write(&inst, "n = 3\nm = 2\n1 1/10\n1/10 1\n1 1\n").unwrap();
    let out = dyndrf(&["ratio", "--in", path(&inst)]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["per_step"][2]["ratio1"], "17/20");
    assert_eq!(v["per_step"][2]["ratio2"], "7/10");
    assert_eq!(v["per_step"][2]["ratio1_decimal"], "0.85");

    let out = dyndrf(&["allocate", "--in", path(&inst), "--ratios"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["steps"][2]["shares"], serde_json::json!(["20/33", "20/33", "1/3"]));
    assert_eq!(v["steps"][2]["saturated_resources"], serde_json::json!([1, 2]));
    assert_eq!(v["ratios"]["cr2"], "7/10");
}

#[test]
fn unnormalized_rows_warn() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("raw.txt");
    std::fs::write(&inst, "n = 2\nm = 2\n2 1\n1 1\n").unwrap();
    let out = dyndrf(&["allocate", "--in", path(&inst)]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("normalized rows 1"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();

    let zero = dir.path().join("zero.txt");
    std::fs::write(&zero, "n = 2\nm = 2\n1 0\n1 1\n").unwrap();
    assert_eq!(dyndrf(&["allocate", "--in", path(&zero)]).status.code(), Some(2));

    let garbage = dir.path().join("garbage.txt");
    std::fs::write(&garbage, "n = 2\nm = 2\n1 0.5\n1 1\n").unwrap();
    let out = dyndrf(&["allocate", "--in", path(&garbage)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let short = dir.path().join("short.txt");
    std::fs::write(&short, "n = 3\nm = 2\n1 1\n").unwrap();
    assert_eq!(dyndrf(&["verify", "--in", path(&short)]).status.code(), Some(2));

    // a report whose step-2 share was lowered fails the audit
    let inst = dir.path().join("micro.txt");
    std::fs::write(&inst, "n = 3\nm = 2\n1 1/10\n1/10 1\n1 1\n").unwrap();
    let report = dir.path().join("run.json");
    assert!(dyndrf(&["allocate", "--in", path(&inst), "--out", path(&report)]).status.success());
    let mut v = json(&report);
    v["steps"][1]["shares"][1] = Value::from("1/2");
    std::fs::write(&report, serde_json::to_string(&v).unwrap()).unwrap();
    let out = dyndrf(&["verify", "--in", path(&inst), "--report", path(&report)]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));

    std::fs::write(&report, "{ not json").unwrap();
    let out = dyndrf(&["verify", "--in", path(&inst), "--report", path(&report)]);
    assert_eq!(out.status.code(), Some(1));

    // batch mode reports the worst failure
    let out = dyndrf(&["verify", "--in", path(&inst), path(&garbage), path(&zero)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("ok (3 steps)"));
}

#[test]
fn gen_rejects_bad_parameters() {
    let out = dyndrf(&["gen", "--family", "t1", "--m", "3", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = dyndrf(&["gen", "--family", "t2", "--m", "2"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("outside"));
}

#[test]
fn random_family_is_reproducible() {
    let a = dyndrf(&["gen", "--family", "random", "--m", "3", "--n", "6", "--seed", "9"]);
    let b = dyndrf(&["gen", "--family", "random", "--m", "3", "--n", "6", "--seed", "9"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
