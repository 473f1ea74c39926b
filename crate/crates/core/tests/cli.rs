use std::path::Path;
use std::process::{Command, Output};

fn omega(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omega"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn classify_json(file: &str) -> (i32, serde_json::Value) {
    let o = omega(&["classify", file]);
    let v = serde_json::from_slice(&o.stdout).unwrap_or(serde_json::Value::Null);
    (code(&o), v)
}

#[test]
fn classify_examples() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"variant":"pointed","gamma":[0]}"#, "Type3b", "ClassPointed", "iv"),
        (r#"{"variant":"natural-down"}"#, "Type2", "ClassELeq", "ii"),
        (r#"{"variant":"equality"}"#, "Type4", "ClassTrivial", "v"),
        (r#"{"variant":"full"}"#, "Type1", "ClassE", "i"),
        (
            r#"{"preorder":{"variant":"partition","partition":{"family":"constant","size":2}}}"#,
            "Type3a",
            "ClassE2Blocks",
            "iii",
        ),
    ];
    for (i, (body, ty, class, cond)) in cases.iter().enumerate() {
        let f = write(dir.path(), &format!("d{i}.json"), body);
        let (c, v) = classify_json(&f);
        assert_eq!(c, 0, "{body}");
        assert_eq!(v["type"], *ty);
        assert_eq!(v["class"], *class);
        assert_eq!(v["condition"], *cond);
    }
}

#[test]
fn classify_monoid_without_preorder() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "sym.json", r#"{"variant":"sym-s"}"#);
    let (c, v) = classify_json(&f);
    assert_eq!(c, 0);
    assert_eq!(v["type"], serde_json::Value::Null);
    assert_eq!(v["class"], "ClassE");
}

#[test]
fn classify_error_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"variant\":\n");
    let o = omega(&["classify", &bad]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let unknown_variant = write(dir.path(), "u.json", r#"{"variant":"lattice"}"#);
    assert_eq!(code(&omega(&["classify", &unknown_variant])), 2);

    // not transitive: 0 sees 1, but 1 sees 2 and 0 does not
    let broken = write(
        dir.path(),
        "broken.json",
        r#"{"variant":"finite-patch","base":{"variant":"equality"},"overrides":[{"point":0,"delta":[0,1]},{"point":1,"delta":[1,2]}]}"#,
    );
    assert_eq!(code(&omega(&["classify", &broken])), 2);

    let group = write(
        dir.path(),
        "g.json",
        r#"{"variant":"group-closure","generators":[{"kind":"pair-swap"}],"budget":100}"#,
    );
    assert_eq!(code(&omega(&["classify", &group])), 3);

    let small = write(
        dir.path(),
        "s.json",
        r#"{"variant":"group-closure","generators":[{"kind":"cycles","cycles":[[0,1]]}],"budget":100}"#,
    );
    let (c, v) = classify_json(&small);
    assert_eq!((c, v["class"].as_str()), (0, Some("ClassTrivial")));
}

#[test]
fn witness_manifests() {
    let o = omega(&["witness", "--tag", "perm-map", "--window", "5"]);
    assert_eq!(code(&o), 0);
    let m: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(m["window_evals"]["left"], serde_json::json!([1, 3, 5, 7, 9]));

    let o = omega(&["witness", "--tag", "tree3", "--window", "2"]);
    assert_eq!(code(&o), 0);
    let m: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(m["window_evals"]["left"], serde_json::json!([0, 2]));

    let o = omega(&["witness", "--tag", "no-such-tag"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("no-such-tag"));

    // the ladder is materialized for a bounded number of levels
    let o = omega(&["witness", "--tag", "tree2", "--window", "40"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("precondition"));
}

#[test]
fn verify_manifest_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let p = path.to_string_lossy().into_owned();
    let o = omega(&["witness", "--tag", "pointed-blocks", "--window", "4", "--out", &p]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&omega(&["verify", "--manifest", &p])), 0);

    let mut m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let right = m["window_evals"]["right"].as_array_mut().unwrap();
    for (i, v) in right.iter_mut().enumerate() {
        if i % 2 == 1 {
            *v = serde_json::json!(1);
        }
    }
    let bad = write(dir.path(), "bad.json", &m.to_string());
    let o = omega(&["verify", "--manifest", &bad]);
    assert_eq!(code(&o), 1);
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["outcome"], "fail");
    assert!(report["counterexample"].is_object());

    let o = omega(&["verify", "--manifest", &p, "--ceiling", "3"]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("pointed-blocks"));
}

#[test]
fn verify_suites() {
    let o = omega(&["verify", "--suite", "paper-core"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let lines: Vec<serde_json::Value> = o
        .stdout
        .split(|&b| b == b'\n')
        .filter(|l| !l.is_empty())
        .map(|l| serde_json::from_slice(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 21);
    let ids: Vec<&str> = lines.iter().map(|l| l["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);

    let o = omega(&["verify", "--suite", "incomparability", "--format", "text"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("i01-both-directions"));
    let o = omega(&["verify", "--suite", "incomparability"]);
    let first: serde_json::Value = serde_json::from_slice(o.stdout.split(|&b| b == b'\n').next().unwrap()).unwrap();
    assert_eq!(first["detail"]["witness"]["two_sided_not_below_m2"]["pass"], true);
    assert_eq!(first["detail"]["witness"]["m2_not_below_two_sided"]["pass"], true);

    assert_eq!(code(&omega(&["verify", "--suite", "paper-core", "--ceiling", "50"])), 4);
    assert_eq!(code(&omega(&["verify", "--suite", "nonexistent"])), 2);
}

#[test]
fn suite_file_with_failure_and_unknown() {
    let dir = tempfile::tempdir().unwrap();
    let failing = write(
        dir.path(),
        "f.json",
        r#"{"name":"f","version":1,"claims":[{"id":"x","check":"orbit-bound","monoid":{"variant":"order-down"},"window":5,"bound":2}]}"#,
    );
    assert_eq!(code(&omega(&["verify", "--suite", &failing])), 1);
    let unknown = write(
        dir.path(),
        "u.json",
        r#"{"name":"u","version":1,"claims":[{"id":"x","check":"closure","generators":[{"kind":"pair-swap"}],"window":3,"bound":4,"gamma_universe":1}]}"#,
    );
    assert_eq!(code(&omega(&["verify", "--suite", &unknown, "--budget", "1"])), 3);
}

#[test]
fn json_output_is_deterministic() {
    let a = omega(&["verify", "--suite", "paper-core"]);
    let b = omega(&["verify", "--suite", "paper-core"]);
    assert_eq!(a.stdout, b.stdout);
    let a = omega(&["witness", "--tag", "tree", "--window", "3"]);
    let b = omega(&["witness", "--tag", "tree", "--window", "3"]);
    assert_eq!(a.stdout, b.stdout);
}
