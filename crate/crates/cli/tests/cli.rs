use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclidx"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = run(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (v, out.status.code().unwrap())
}

const TRIPLE: &str = r#"{"n": 1, "frames": [[[1], [0]], [[0], [1]], [[1], [1]]]}"#;
const ROTATION: &str = r#"{"n": 1, "system": [[[0, 1], [-1, 0]], [[0, 1], [-1, 0]]]}"#;
const IDENTITY: &str = r#"{"n": 1, "system": [[1, 0, 0, 1], [1, 0, 0, 1], [1, 0, 0, 1]]}"#;

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = fixture(
        dir.path(),
        "good.json",
        r#"{"n": 2, "frames": [[0,0, 0,0, 1,0, 0,1]]}"#,
    );
    let bad = fixture(
        dir.path(),
        "bad.json",
        r#"{"n": 1, "frames": [[[1], [0]], [[0], [0]]]}"#,
    );
    let junk = fixture(dir.path(), "junk.json", r#"{"n": 1, "frames": [[1, "x"]]}"#);
    let short = fixture(
        dir.path(),
        "short.json",
        r#"{"n": 1, "frames": [[1, 0, 1]]}"#,
    );
    assert_eq!(run(&["validate", &good]).status.code(), Some(0));
    assert_eq!(run(&["validate", &bad]).status.code(), Some(1));
    assert_eq!(run(&["validate", &junk]).status.code(), Some(2));
    assert_eq!(run(&["validate", &short]).status.code(), Some(2));
    assert_eq!(
        run(&["validate", "/nonexistent/file.json"]).status.code(),
        Some(2)
    );
    let sys = fixture(
        dir.path(),
        "sys.json",
        r#"{"n": 1, "system": [[1, 1, 0, 2]]}"#,
    );
    assert_eq!(run(&["validate", &sys]).status.code(), Some(1));
}

#[test]
fn compindex_reports() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixture(dir.path(), "t.json", TRIPLE);
    let (v, code) = json(&["compindex", &f, "1", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["breakdown"]["mu"], 0);
    assert_eq!(v["results"]["breakdown"]["mu_star"], 0);
    let (v, _) = json(&["compindex", &f, "2", "0"]);
    assert_eq!(v["results"]["headline"]["mu"], 1);
    let (v, _) = json(&["compindex", &f, "2", "0", "--dual"]);
    assert_eq!(v["results"]["headline"]["mu*"], 0);
    assert_eq!(run(&["compindex", &f, "0", "3"]).status.code(), Some(2));
}

#[test]
fn cyclic_reports() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixture(dir.path(), "t.json", TRIPLE);
    let (v, code) = json(&["cyclic", &f]);
    assert_eq!(code, 0);
    let s = &v["results"]["sums"];
    assert_eq!(
        (
            s["mu_minus"].clone(),
            s["mu_plus"].clone(),
            s["nu_minus"].clone(),
            s["nu_plus"].clone()
        ),
        (2.into(), 1.into(), 1.into(), 0.into())
    );
    let (v, _) = json(&["cyclic", &f, "--kind", "second"]);
    assert_eq!(v["results"]["headline"]["nu_minus"], 1);

    let pair = fixture(
        dir.path(),
        "p.json",
        r#"{"n": 1, "frames": [[[1], [0]], [[0], [1]]]}"#,
    );
    let (v, code) = json(&["cyclic", &pair]);
    assert_eq!(code, 0);
    let s = &v["results"]["sums"];
    assert_eq!(
        (s["mu_minus"].clone(), s["mu_plus"].clone()),
        (1.into(), 1.into())
    );
    assert_eq!(
        (s["nu_minus"].clone(), s["nu_plus"].clone()),
        (0.into(), 0.into())
    );

    let single = fixture(dir.path(), "s.json", r#"{"n": 1, "frames": [[[1], [0]]]}"#);
    assert_eq!(run(&["cyclic", &single]).status.code(), Some(2));
}

#[test]
fn kashiwara_reports() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixture(dir.path(), "t.json", TRIPLE);
    let (v, code) = json(&["kashiwara", &f]);
    assert_eq!((v["results"]["tau"].clone(), code), ((-1).into(), 0));
    let eq = fixture(
        dir.path(),
        "e.json",
        r#"{"n": 1, "frames": [[1, 2], [1, 2], [1, 2]]}"#,
    );
    assert_eq!(json(&["kashiwara", &eq]).0["results"]["tau"], 0);
    let four = fixture(
        dir.path(),
        "f.json",
        r#"{"n": 1, "frames": [[1, 0], [0, 1], [1, 1], [1, -2]]}"#,
    );
    assert_eq!(json(&["kashiwara", &four]).1, 0);
    let pair = fixture(
        dir.path(),
        "p.json",
        r#"{"n": 1, "frames": [[1, 0], [0, 1]]}"#,
    );
    assert_eq!(run(&["kashiwara", &pair]).status.code(), Some(2));
}

#[test]
fn focal_reports() {
    let dir = tempfile::tempdir().unwrap();
    let rot = fixture(dir.path(), "r.json", ROTATION);
    let (v, code) = json(&["focal", &rot]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["tally"]["l_star_total"], 1);
    assert_eq!(v["results"]["disconjugacy"]["disconjugate"], false);
    let (v, _) = json(&["focal", &rot, "--backward"]);
    assert_eq!(v["results"]["headline"]["l_star"], 1);
    assert_eq!(
        run(&["focal", &rot, "--principal-at", "3"]).status.code(),
        Some(2)
    );

    let id = fixture(dir.path(), "i.json", IDENTITY);
    let (v, code) = json(&["focal", &id]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["tally"]["l_total"], 0);
    assert_eq!(v["results"]["tally"]["l_star_total"], 0);
    assert_eq!(v["results"]["disconjugacy"]["disconjugate"], true);

    let frames = fixture(dir.path(), "t.json", TRIPLE);
    assert_eq!(run(&["focal", &frames]).status.code(), Some(2));
}

#[test]
fn verify_is_deterministic() {
    let a = run(&["verify", "--trials", "3", "--seed", "9"]);
    let b = run(&["verify", "--trials", "3", "--seed", "9"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(run(&["verify", "--trials", "0"]).status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixture(dir.path(), "t.json", TRIPLE);
    let a = run(&["cyclic", &f, "--json"]);
    let b = run(&["cyclic", &f, "--json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn tolerance_flags() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixture(dir.path(), "t.json", TRIPLE);
    let (v, code) = json(&[
        "cyclic",
        &f,
        "--tol-eig-kappa",
        "1000",
        "--tol-rank",
        "1e-10",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["tolerance"]["eig_zero_factor"], 1000.0);
    assert_eq!(
        run(&["cyclic", &f, "--tol-rank", "-1"]).status.code(),
        Some(2)
    );
}
