use std::process::{Command, Output};

use serde_json::Value;
use sk1lab::jobs::{cache_key, JobSpec};

fn sk1lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sk1lab")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn sk1_of_q8_is_trivial() {
    let out = sk1lab(&["sk1", "--group", "Q8", "--ring", "Zp", "--p", "2", "--N", "4", "--no-cache"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema_version"], "sk1lab.report/1");
    assert_eq!(v["verified"], true);
    assert_eq!(v["result"]["total"]["invariant_factors"], serde_json::json!([]));
    assert_eq!(v["result"]["total"]["free_rank"], 0);
}

#[test]
fn integrality_logcheck_on_d8() {
    let out = sk1lab(&[
        "logcheck", "--group", "D8", "--p", "2", "--N", "5", "--suite", "integrality", "--trials", "200", "--seed", "7",
        "--no-cache",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let reports = v["result"].as_array().unwrap();
    assert!(!reports.is_empty());
    for r in reports {
        assert_eq!(r["failures"], 0, "{r}");
        assert_eq!(r["trials"], 200);
    }
}

#[test]
fn compare_rings_winf_laurent_is_iso() {
    let out = sk1lab(&["compare-rings", "--pair", "Winf-Laurent", "--p", "3", "--f", "2", "--D", "8", "--no-cache"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["verdict"], "iso");
    assert!(v["result"]["sk1_statement"].as_str().unwrap().ends_with("isomorphism"));
    assert_eq!(v["verified"], true);
    let out = sk1lab(&["compare-rings", "--pair", "Winf-Laurent", "--group", "Q8", "--p", "2", "--no-cache"]);
    assert_eq!(json(&out)["result"]["source_sk1"]["invariant_factors"], serde_json::json!([]));
}

#[test]
fn text_format_renders_keys() {
    let out = sk1lab(&["coinv", "--ring", "Witt", "--p", "3", "--f", "2", "--N", "3", "--no-cache", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("schema_version: \"sk1lab.report/1\""), "{s}");
    assert!(s.contains("invariant_factors: [27]"), "{s}");
}

#[test]
fn invalid_input_exits_with_one() {
    let out = sk1lab(&["sk1", "--group", "Q9", "--p", "2", "--no-cache"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown group"));
    let out = sk1lab(&["sk1", "--group", "Q8", "--ring", "Zp", "--no-cache"]);
    assert_eq!(out.status.code(), Some(1));
    let out = sk1lab(&["compare-rings", "--pair", "Nope", "--p", "2", "--no-cache"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unverified_report_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sk1", "--group", "C4", "--ring", "Zp", "--p", "2", "--N", "3"];
    let mut job = JobSpec::new(sk1lab::jobs::Command::Sk1);
    job.group = Some("C4".into());
    job.ring = Some("Zp".into());
    job.p = Some(2);
    job.n = Some(3);
    let path = dir.path().join(format!("{}.json", cache_key(&job).unwrap()));
    let cached = |extra: &[&str]| {
        let mut a: Vec<&str> = args.to_vec();
        a.extend(["--cache-dir", dir.path().to_str().unwrap()]);
        a.extend(extra);
        sk1lab(&a)
    };
    assert_eq!(cached(&[]).status.code(), Some(0));
    assert!(path.exists(), "cache entry written at the expected key");
    let mut v: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    v["verified"] = Value::Bool(false);
    std::fs::write(&path, serde_json::to_vec(&v).unwrap()).unwrap();
    assert_eq!(cached(&[]).status.code(), Some(2));
    assert_eq!(cached(&["--no-cache"]).status.code(), Some(0));
}

#[test]
fn output_is_deterministic_and_cache_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let base = ["logcheck", "--group", "Q8", "--p", "2", "--N", "4", "--suite", "exp-log", "--trials", "10", "--seed", "3"];
    let run = |extra: &[&str]| {
        let mut a: Vec<&str> = base.to_vec();
        a.extend(extra);
        let out = sk1lab(&a);
        assert_eq!(out.status.code(), Some(0));
        out.stdout
    };
    let a = run(&["--no-cache"]);
    assert_eq!(a, run(&["--no-cache"]));
    assert_eq!(a, run(&["--cache-dir", d]));
    assert_eq!(a, run(&["--cache-dir", d]));
    assert_eq!(std::fs::read_dir(d).unwrap().count(), 1);
}

#[test]
fn batch_runs_every_job() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("jobs.json");
    let jobs = serde_json::json!([
        { "command": "sk1", "group": "S3", "ring": "Zp", "p": 3, "N": 3 },
        { "command": "orbits", "group": "C6", "p": 2 },
        { "command": "h2", "group": "C2xC2" },
    ]);
    std::fs::write(&file, jobs.to_string()).unwrap();
    let out = sk1lab(&["batch", file.to_str().unwrap(), "--no-cache"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let docs = v.as_array().unwrap();
    assert_eq!(docs.len(), 3);
    assert!(docs.iter().all(|d| d["verified"] == true));
    assert_eq!(docs[2]["job"]["command"], "h2");
}

#[test]
fn batch_rejects_unknown_fields() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("jobs.json");
    std::fs::write(&file, r#"[{"command":"sk1","group":"Q8","p":2,"bogus":1}]"#).unwrap();
    let out = sk1lab(&["batch", file.to_str().unwrap(), "--no-cache"]);
    assert_eq!(out.status.code(), Some(1));
}
