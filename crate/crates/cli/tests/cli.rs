use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn pgtower(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pgtower")).args(args).env("PGTOWER_OUT", out).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_one_case() {
    let dir = tempfile::tempdir().unwrap();
    let o = pgtower(&["verify", "--case", "-445"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("pairwise non-isomorphic"));
    assert!(!stdout(&o).contains("FAIL"));
    assert!(dir.path().join("d-445/verify.txt").exists());
}

#[test]
fn stage_one_run_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let o = pgtower(&["run", "--case", "-445", "--stage", "1", "--assignment", "1", "--tree-mode", "paper"], dir.path());
    // the stage stops at class 2 by design
    assert_eq!(o.status.code(), Some(3));
    let text = stdout(&o);
    assert!(text.contains("survivors: 3"));
    assert!(text.contains("after quotient filter: 1"));
    let base = dir.path().join("d-445/assignment-1");
    for f in ["report.txt", "stage1-tree.dot", "stage1-candidates.txt", "stage1-passed.txt"] {
        assert!(base.join(f).exists(), "{f}");
    }
    let passed = fs::read_to_string(base.join("stage1-passed.txt")).unwrap();
    assert_eq!(passed.matches("p=2").count(), 1);
    assert!(fs::read_to_string(base.join("stage1-tree.dot")).unwrap().starts_with("digraph"));
}

#[test]
fn out_flag_overrides_the_environment() {
    let env = tempfile::tempdir().unwrap();
    let flag = tempfile::tempdir().unwrap();
    let o = pgtower(&["export", "--case", "-1015", "--out", flag.path().to_str().unwrap()], env.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(flag.path().join("d-1015/config.json").exists());
    assert!(!env.path().join("d-1015").exists());
    let finals = fs::read_to_string(flag.path().join("d-1015/finals.txt")).unwrap();
    assert_eq!(finals.matches("p=2").count(), 2);
}

#[test]
fn exported_config_runs() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(pgtower(&["export", "--case", "-1015"], dir.path()).status.code(), Some(0));
    let cfg = dir.path().join("d-1015/config.json");
    let o = pgtower(&["run", "--config", cfg.to_str().unwrap(), "--stage", "1", "--assignment", "1", "--jobs", "2"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("after quotient filter: 2"));
}

#[test]
fn unconstrained_search_hits_the_cap() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{
        "name": "free",
        "prime": 2,
        "max_class": 2,
        "stages": [{
            "name": "all",
            "roots": [{"name": "C2xC2", "presentation": "p=2 n=2 d=2"}],
            "attach": "direct",
            "lattices": []
        }]
    }"#;
    let path = dir.path().join("custom.json");
    fs::write(&path, cfg).unwrap();
    let o = pgtower(&["run", "--config", path.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("cap-hit"));
    assert!(dir.path().join("free/summary.txt").exists());
}

#[test]
fn configuration_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(pgtower(&["run", "--case", "-7"], dir.path()).status.code(), Some(2));
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"name\": 1}").unwrap();
    assert_eq!(pgtower(&["run", "--config", bad.to_str().unwrap()], dir.path()).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(pgtower(&["run", "--config", missing.to_str().unwrap()], dir.path()).status.code(), Some(2));
    assert_eq!(pgtower(&["run", "--case", "-445", "--stage", "7"], dir.path()).status.code(), Some(2));
    assert_eq!(pgtower(&["run", "--case", "-445", "--assignment", "99"], dir.path()).status.code(), Some(2));
    assert_eq!(pgtower(&["run"], dir.path()).status.code(), Some(2));
    assert_eq!(pgtower(&["oracle", "nosuch"], dir.path()).status.code(), Some(2));
}

#[test]
fn oracle_suite() {
    let dir = tempfile::tempdir().unwrap();
    let o = pgtower(&["oracle", "linalg", "abelian"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("suite linalg: pass"));
    assert!(stdout(&o).contains("suite abelian: pass"));
}
