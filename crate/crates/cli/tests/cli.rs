use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn mcqc(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_mcqc")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn json_path(tag: &str) -> PathBuf {
    std::env::temp_dir().join(format!("mcqc-{}-{tag}.json", std::process::id()))
}

fn run_json(args: &[&str], tag: &str) -> (i32, Value) {
    let path = json_path(tag);
    let mut all = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    all.extend(["--json", &p]);
    let (code, _, err) = mcqc(&all);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("no report: {err}"));
    std::fs::remove_file(&path).ok();
    (code, serde_json::from_str(&text).unwrap())
}

#[test]
fn macmahon_report() {
    let (code, v) = run_json(&["verify-macmahon", "--ncut", "6"], "macmahon");
    assert_eq!(code, 0);
    assert_eq!(v["tool"], "mcqc");
    assert!(v["version"].is_string());
    assert_eq!(v["job"]["check"], "verify-macmahon");
    assert_eq!(v["job"]["ncut"], 6);
    let first = &v["entries"][0];
    assert_eq!(first["status"], "pass");
    let want: Vec<Value> = ["1", "1", "3", "6", "13", "24", "48"].iter().map(|s| Value::from(*s)).collect();
    assert_eq!(first["witness"]["plane_partitions"], Value::Array(want));
}

#[test]
fn summary_lines() {
    let (code, out, _) = mcqc(&["verify-4d-curve", "--ncut", "3"]);
    assert_eq!(code, 0);
    assert!(out.lines().next().unwrap().starts_with("PASS"));
    let (code, _, _) = mcqc(&["verify-qcurve", "--ncut", "0"]);
    assert_eq!(code, 0);
}

#[test]
fn other_parameters() {
    let (code, out, _) = mcqc(&["verify-4d-curve", "--ncut", "3", "--hbar", "2/7"]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = mcqc(&["verify-qcurve", "--ncut", "2", "--u", "-3/5"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn bad_configuration_exits_2() {
    for args in [
        &["verify-qcurve", "--u", "1"][..],
        &["verify-qcurve", "--u", "abc"],
        &["verify-qcurve", "--u", "0"],
        &["verify-4d-curve", "--hbar", "0"],
    ] {
        let (code, _, err) = mcqc(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(err.starts_with("mcqc:"), "{err}");
    }
}

#[test]
fn unwritable_report_exits_2() {
    let (code, _, _) = mcqc(&["verify-qcurve", "--ncut", "0", "--json", "/nonexistent/dir/r.json"]);
    assert_eq!(code, 2);
}

#[test]
fn entries_are_reproducible() {
    let args = ["verify-fay-4d", "--ncut", "2", "--seed", "3"];
    let (c1, mut a) = run_json(&args, "repeat-a");
    let (c2, mut b) = run_json(&args, "repeat-b");
    assert_eq!((c1, c2), (0, 0));
    for v in [&mut a, &mut b] {
        let m = v.as_object_mut().unwrap();
        m.remove("wall_time_s");
        m.remove("profile");
    }
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}
