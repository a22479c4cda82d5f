use std::path::Path;
use std::process::{Command, Output};

fn qcaps(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcaps")).args(args).current_dir(dir).output().unwrap()
}

fn stdout(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn tables_report_counts() {
    let dir = tempfile::tempdir().unwrap();
    let o = qcaps(&["tables", "--dim", "3"], dir.path());
    assert!(o.status.success());
    let v = stdout(&o);
    assert_eq!(v["points"], 85);
    assert_eq!(v["points_per_hyperplane"], 21);
    assert!(stderr(&o).starts_with("config "));
}

#[test]
fn verify_reports_frame_and_names_collinear_triple() {
    let dir = tempfile::tempdir().unwrap();
    let frame = r#"{"dim":4,"n":6,"points":["00001","00010","00100","01000","10000","11111"]}"#;
    std::fs::write(dir.path().join("frame.caps"), format!("{frame}\n")).unwrap();
    let o = qcaps(&["verify", "frame.caps"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let v = stdout(&o);
    assert_eq!(v[0]["valid"], true);
    assert_eq!(v[0]["profile"]["quantum"], serde_json::Value::Null);

    let bad = r#"{"dim":2,"n":3,"points":["001","010","011"]}"#;
    std::fs::write(dir.path().join("bad.caps"), format!("{frame}\n\n{bad}\n")).unwrap();
    let o = qcaps(&["verify", "bad.caps"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("line 3") && err.contains("collinear triple 001 010 011"), "{err}");
}

#[test]
fn classify_reproduces_seed_counts_and_writes_seed_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = qcaps(&["classify", "--seed-file", "seeds.jsonl"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let v = stdout(&o);
    let counts: Vec<(u64, usize, usize)> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            let cls = r["classes"].as_array().unwrap();
            (r["size"].as_u64().unwrap(), cls.len(), cls.iter().filter(|c| c["complete"] == true).count())
        })
        .collect();
    assert_eq!(counts, [(13, 4, 1), (15, 1, 0), (17, 1, 1)]);
    let seeds = std::fs::read_to_string(dir.path().join("seeds.jsonl")).unwrap();
    assert_eq!(seeds.lines().count(), 6);

    // empty input gives an empty report
    std::fs::write(dir.path().join("empty.caps"), "").unwrap();
    let o = qcaps(&["classify", "--input", "empty.caps"], dir.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o), serde_json::json!([]));
}

#[test]
fn search_finds_size_ten_caps_and_they_verify() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "search", "--target", "10", "--exploratory", "--parity-prune", "--max-section-prune", "--quiet",
        "--caps-out", "q10.caps", "--output", "r10.json",
    ];
    let o = qcaps(&args, dir.path());
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    let o = qcaps(&["verify", "q10.caps"], dir.path());
    assert!(o.status.success());
    let v = stdout(&o);
    for line in v.as_array().unwrap() {
        assert_eq!(line["profile"]["quantum"], serde_json::json!([10, 0, 4]));
    }
    let o = qcaps(&["classify", "--input", "q10.caps"], dir.path());
    assert_eq!(stdout(&o)[0]["classes"].as_array().unwrap().len(), 2);

    let o = qcaps(&["report", "r10.json"], dir.path());
    assert_eq!(o.status.code(), Some(4));
    let mut r: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("r10.json")).unwrap()).unwrap();
    r["totals"]["nodes_visited"] = 1.into();
    std::fs::write(dir.path().join("bad.json"), r.to_string()).unwrap();
    assert_eq!(qcaps(&["report", "bad.json"], dir.path()).status.code(), Some(2));
}

#[test]
fn equiv_finds_witness_or_reason() {
    let dir = tempfile::tempdir().unwrap();
    let a = r#"{"dim":2,"n":4,"points":["001","010","100","111"]}"#;
    let b = r#"{"dim":2,"n":4,"points":["001","010","100","1ww"]}"#;
    let c = r#"{"dim":2,"n":5,"points":["001","010","100","111","1wW"]}"#;
    std::fs::write(dir.path().join("ab.caps"), format!("{a}\n{b}\n")).unwrap();
    std::fs::write(dir.path().join("c.caps"), format!("{c}\n")).unwrap();
    let o = qcaps(&["equiv", "ab.caps"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o)["equivalent"], true);
    let o = qcaps(&["equiv", "ab.caps", "c.caps"], dir.path());
    assert_eq!(stdout(&o)["equivalent"], true);
    std::fs::write(dir.path().join("a.caps"), format!("{a}\n")).unwrap();
    let o = qcaps(&["equiv", "a.caps", "c.caps"], dir.path());
    assert_eq!(stdout(&o)["equivalent"], false);
}

#[test]
fn search_exit_codes_and_resume() {
    let dir = tempfile::tempdir().unwrap();
    // strict mode refuses other targets
    let o = qcaps(&["search", "--target", "12", "--quiet"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(qcaps(&["search", "--bogus"], dir.path()).status.code(), Some(1));
    assert_eq!(qcaps(&["--help"], dir.path()).status.code(), Some(0));

    let base = ["search", "--target", "37", "--seeds", "17-0", "--unit-limit", "1", "--quiet"];
    let run = |extra: &[&str]| {
        let mut a = base.to_vec();
        a.extend_from_slice(extra);
        qcaps(&a, dir.path())
    };
    let full = run(&["--max-nodes", "3000", "--output", "full.json"]);
    assert_eq!(full.status.code(), Some(0), "{}", stderr(&full));
    let first = run(&["--max-nodes", "1000", "--checkpoint", "ck"]);
    assert!(first.status.success());
    let digest_line = |o: &Output| stderr(o).lines().next().unwrap().to_string();
    assert_eq!(digest_line(&first), digest_line(&full));
    let second = run(&["--max-nodes", "2000", "--resume", "ck", "--output", "resumed.json"]);
    assert!(second.status.success(), "{}", stderr(&second));
    let load = |f: &str| -> serde_json::Value {
        serde_json::from_slice(&std::fs::read(dir.path().join(f)).unwrap()).unwrap()
    };
    // 1000 + 2000 nodes of the unit equal one run with a 3000-node budget
    assert_eq!(load("full.json")["report_digest"], load("resumed.json")["report_digest"]);

    let o = run(&["--resume", "ck", "--parity-prune"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("checkpoint"));
}
