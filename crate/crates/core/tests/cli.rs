use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn pi0(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pi0"))
        .args(args)
        .output()
        .expect("spawn pi0")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn spec_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn path(f: &tempfile::NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

#[test]
fn group_split_torus_rank_two() {
    let f = spec_file(r#"{"name": "split torus", "rank": 2, "sigma": [[1,0],[0,1]], "coroots": []}"#);
    let o = pi0(&["group", path(&f)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("rank 2, order 4"), "{}", stdout(&o));
}

#[test]
fn group_pgl2_with_oracle() {
    let f = spec_file(r#"{"name": "PGL2", "rank": 1, "sigma": [[1]], "coroots": [[2]]}"#);
    let o = pi0(&["--oracle", "group", path(&f)]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("rank 1, order 2"), "{out}");
    assert!(out.contains("h1-enumeration match"), "{out}");
}

#[test]
fn malformed_sigma_is_an_input_error() {
    let f = spec_file(r#"{"rank": 2, "sigma": [[1,1],[0,1]], "coroots": []}"#);
    let o = pi0(&["group", path(&f)]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("sigma"), "{err}");
}

#[test]
fn unreadable_and_garbage_input() {
    assert_eq!(pi0(&["group", "/nonexistent/spec.json"]).status.code(), Some(1));
    let f = spec_file("not json");
    assert_eq!(pi0(&["group", path(&f)]).status.code(), Some(1));
    let f = spec_file(r#"{"rank": 1, "sigma": [[99999999999999999999]]}"#);
    assert_eq!(pi0(&["group", path(&f)]).status.code(), Some(1));
}

#[test]
fn json_output_round_trips() {
    let f = spec_file(r#"{"name": "x", "rank": 3, "sigma": [[0,1,0],[1,0,0],[0,0,1]], "coroots": [[1,1,0]]}"#);
    let first = pi0(&["--json", "--oracle", "group", path(&f)]);
    assert_eq!(first.status.code(), Some(0));
    let record: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(record["oracle"]["match"], Value::Bool(true));
    let again_file = spec_file(&stdout(&first));
    let second = pi0(&["--json", "--oracle", "group", path(&again_file)]);
    assert_eq!(stdout(&first), stdout(&second));
    for key in ["pi0_rank", "order", "representatives", "half_representatives"] {
        assert!(record.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn catalog_entries() {
    let o = pi0(&["catalog", "gl", "3"]);
    assert!(stdout(&o).contains("rank 1,"), "{}", stdout(&o));
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&pi0(&["catalog", "sl", "4"])).contains("rank 0,"));
    assert!(stdout(&pi0(&["catalog", "elliptic-rect"])).contains("rank 1,"));
    assert_eq!(pi0(&["catalog", "spin", "7"]).status.code(), Some(1));
    let all = pi0(&["catalog"]);
    assert_eq!(all.status.code(), Some(0));
    assert!(stdout(&all).contains("23 passed, 0 failed"));
}

#[test]
fn elliptic_coefficients() {
    let o = pi0(&["elliptic", "--p", "-1", "--q", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("D = 4") && out.contains("2 components"), "{out}");

    let o = pi0(&["--json", "elliptic", "--p", "0", "--q", "-1"]);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["components"], 1);
    assert_eq!(r["discriminant"], -27.0);

    let o = pi0(&["--json", "elliptic", "--p", "-3", "--q", "2000000001/1000000000"]);
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["components"], 1);
}

#[test]
fn elliptic_lattice_mode() {
    let o = pi0(&["--json", "elliptic", "--lattice", "1", "0", "0", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["shape"], "Rectangular");
    assert_eq!(r["components"], 2);
    assert!(r["p"].as_f64().unwrap() < 0.0);
    assert!(r["q"].as_f64().unwrap().abs() < 1e-8);
}

#[test]
fn elliptic_input_errors() {
    assert_eq!(pi0(&["elliptic", "--p", "0", "--q", "0"]).status.code(), Some(1));
    assert_eq!(pi0(&["elliptic", "--p", "-3", "--q", "2"]).status.code(), Some(1));
    assert_eq!(pi0(&["elliptic", "--p", "x", "--q", "1"]).status.code(), Some(1));
    assert_eq!(pi0(&["elliptic", "--p", "1/0", "--q", "1"]).status.code(), Some(1));
    assert_eq!(pi0(&["elliptic"]).status.code(), Some(1));
    assert_eq!(
        pi0(&["elliptic", "--lattice", "1", "0", "0.3", "1.1"]).status.code(),
        Some(1)
    );
    assert_eq!(
        pi0(&["elliptic", "--lattice", "1", "0", "2", "0"]).status.code(),
        Some(1)
    );
}

#[test]
fn h1_command() {
    let f = spec_file(r#"{"rank": 1, "sigma": [[-1]], "coroots": [[2]]}"#);
    let o = pi0(&["--oracle", "h1", path(&f)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ℤ/2"), "{}", stdout(&o));
    let f = spec_file(r#"{"rank": 2, "sigma": [[0,1],[1,0]], "coroots": []}"#);
    let o = pi0(&["--json", "h1", path(&f)]);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["invariant_factors"], Value::Array(vec![]));
}

#[test]
fn enumeration_cap_from_environment() {
    let f = spec_file(r#"{"rank": 2, "sigma": [[1,0],[0,1]], "coroots": [[4,0],[0,4]]}"#);
    let o = Command::new(env!("CARGO_BIN_EXE_pi0"))
        .args(["--oracle", "group", path(&f)])
        .env("PI0_ENUM_CAP", "8")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
}

#[test]
fn selftest_is_deterministic() {
    let a = pi0(&["--json", "--seed", "42", "--cases", "20", "selftest"]);
    let b = pi0(&["--json", "--seed", "42", "--cases", "20", "selftest"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn selftest_bad_fixture_exits_2() {
    let f = spec_file(r#"{"name": "wrong", "rank": 1, "sigma": [[1]], "coroots": [[2]], "expected_pi0_rank": 0}"#);
    let o = pi0(&["--cases", "5", "selftest", "--fixture", path(&f)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("fixture 0 (wrong)"), "{}", stdout(&o));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(pi0(&[]).status.code(), Some(1));
    assert_eq!(pi0(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(pi0(&["--tolerance", "-1", "catalog"]).status.code(), Some(1));
    assert_eq!(pi0(&["--help"]).status.code(), Some(0));
}
