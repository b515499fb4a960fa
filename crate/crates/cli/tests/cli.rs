use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_planar-seq"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn gadget(dir: &Path, kind: &str, m: &str, idx: &str) -> PathBuf {
    let p = dir.join(format!("{kind}.json"));
    let o = run(&["gadget", kind, "--m", m, "--indices", idx, "-o", p.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    p
}

#[test]
fn verify_equaliser() {
    let o = run(&["--json", "verify", "lemma", "eq-special", "--m", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["status"], "pass");
    assert_eq!(r["measured"]["allocation"], serde_json::json!(["00", "11"]));
}

#[test]
fn verify_errors_and_caps() {
    assert_eq!(run(&["verify", "lemma", "no-such-lemma"]).status.code(), Some(2));
    let o = run(&["--json", "verify", "lemma", "eq-special", "--m", "1000000"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not-certified-at-scale"));
    let o = run(&["verify", "list"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 13);
}

#[test]
fn gadget_then_solve() {
    let d = TempDir::new().unwrap();
    let p = gadget(d.path(), "equaliser", "2", "1,2");
    assert!(d.path().join("equaliser.roles.json").exists());
    let o = run(&["solve", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("embeddable: true, count_up_to_reflection: 2"));
    let o = run(&["allocation", p.to_str().unwrap()]);
    assert!(stdout(&o).contains("00") && stdout(&o).contains("11"));
}

#[test]
fn concat_of_opposites_is_not_embeddable() {
    let d = TempDir::new().unwrap();
    let eq = gadget(d.path(), "equaliser", "2", "1,2");
    let neq = gadget(d.path(), "negator", "2", "1,2");
    let out = d.path().join("both.json");
    let o = run(&["combine", "concat", eq.to_str().unwrap(), neq.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(run(&["solve", out.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn export_dot_and_svg() {
    let d = TempDir::new().unwrap();
    let p = gadget(d.path(), "equaliser", "2", "1,2");
    let o = run(&["export", "dot", p.to_str().unwrap(), "--graph", "3"]);
    assert!(o.status.success());
    let dot = stdout(&o);
    assert!(dot.starts_with("graph "));
    assert!(dot.contains("[id="));
    let svg = d.path().join("g1.svg");
    let o = run(&["export", "svg", p.to_str().unwrap(), "-o", svg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<svg"));
    let rot = d.path().join("g1.rot.json");
    assert!(rot.exists());
    // Drawing the sidecar again gives the same picture.
    let again = d.path().join("again.svg");
    let o = run(&["export", "svg", p.to_str().unwrap(), "--rotation", rot.to_str().unwrap(), "-o", again.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read_to_string(&svg).unwrap(), std::fs::read_to_string(&again).unwrap());
}

#[test]
fn reduce_from_stdin() {
    let d = TempDir::new().unwrap();
    let out = d.path().join("mini.json");
    let mut child = bin()
        .args(["--json", "reduce", "--cnf", "-", "--mode", "mini", "-o", out.to_str().unwrap()])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"p cnf 3 1\n1 2 3 0\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["valid"], true);
    assert_eq!(r["length"], 15);
    assert_eq!(run(&["solve", out.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn convert_weak() {
    let d = TempDir::new().unwrap();
    let p = gadget(d.path(), "or", "3", "1");
    let out = d.path().join("weak.json");
    let o = run(&["convert", "weak", p.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(s["mode"], "weak");
    assert!(d.path().join("weak.gadgets.json").exists());
}

#[test]
fn missing_file_is_an_error() {
    assert_eq!(run(&["solve", "/nonexistent/x.json"]).status.code(), Some(2));
    assert_eq!(run(&["gadget", "equaliser"]).status.code(), Some(2));
}
