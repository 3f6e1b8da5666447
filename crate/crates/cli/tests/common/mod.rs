//! Helpers shared by the CLI integration tests and the acceptance harness.
#![allow(dead_code)]

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

/// Set to regenerate the expected outputs under `fixtures/expected`.
pub const UPDATE_ENV: &str = "UPDATE_GOLDENS";

/// Golden streams: name, plane file.
pub const GOLDENS: [(&str, &str); 3] = [
    ("noiseless", "plane.json"),
    ("noisy", "plane.json"),
    ("pixel", "plane_camera.json"),
];

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_gesture-pointer")
}

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn command() -> Command {
    let mut c = Command::new(bin());
    c.env_remove("GESTURE_POINTER_CONFIG").env("RUST_LOG", "off");
    c
}

pub fn run(args: &[&str]) -> Output {
    command().args(args).output().expect("spawning the binary")
}

pub fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = command()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawning the binary");
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

pub fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

/// Replay a golden stream with pick snapping against the fixture registry.
pub fn replay_golden(name: &str, plane: &str) -> Output {
    let plane = fixture(plane);
    let registry = fixture("registry_pick.json");
    let stream = fixture(&format!("{name}.jsonl"));
    run(&[
        "replay",
        "--plane",
        path_str(&plane),
        "--registry",
        path_str(&registry),
        "--snap",
        "pick",
        path_str(&stream),
    ])
}

/// Compare against `fixtures/expected/<name>.jsonl`, rewriting it when
/// `UPDATE_GOLDENS` is set. Returns a description of the first mismatch.
pub fn check_golden(name: &str, actual: &str) -> Result<(), String> {
    let path = fixture(&format!("expected/{name}.jsonl"));
    if std::env::var_os(UPDATE_ENV).is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return Ok(());
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected == actual {
        return Ok(());
    }
    let line = expected
        .lines()
        .zip(actual.lines())
        .position(|(a, b)| a != b)
        .unwrap_or_else(|| expected.lines().count().min(actual.lines().count()));
    Err(format!("{name}: output differs from golden at line {}", line + 1))
}

/// Stream lines of live output, dropping `{"err":...}` replies.
pub fn without_errors(s: &str) -> String {
    s.lines()
        .filter(|l| !l.starts_with("{\"err\""))
        .map(|l| format!("{l}\n"))
        .collect()
}

/// Replay stdout restricted to point lines (drops snap results).
pub fn points_only(s: &str) -> String {
    s.lines()
        .filter(|l| !l.starts_with("{\"snap\""))
        .map(|l| format!("{l}\n"))
        .collect()
}
