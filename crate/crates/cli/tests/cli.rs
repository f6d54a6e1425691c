use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_desparsify"));
    c.env_remove("DESPARSIFY_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn gen(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut all = vec!["gen"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let out = run(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_counts() {
    let dir = TempDir::new().unwrap();
    let out = run(&["gen", "clique-union", "--sizes", "8,8,8", "--bridges", "2", "--out", s(&dir.path().join("g"))]);
    let r = report(&out);
    assert_eq!((r["n"].as_u64(), r["m"].as_u64()), (Some(24), Some(86)));
    let out = run(&["gen", "cycle", "--n", "8"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("8 8"));
    let out = run(&["gen", "tree", "--n", "10", "--seed", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("10 9"));
}

#[test]
fn desparsify_passes_its_verdicts() {
    let dir = TempDir::new().unwrap();
    let g = gen(dir.path(), "g", &["clique-union", "--sizes", "6,6,6", "--bridges", "1"]);
    let h = dir.path().join("h");
    let out = run(&["desparsify", s(&g), "--eps", "0.3", "--verify", "cut,twp", "--out", s(&h)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(report(&out)["ok"], Value::Bool(true));
    let written = std::fs::read_to_string(&h).unwrap();
    assert_eq!(written.lines().next(), std::fs::read_to_string(&g).unwrap().lines().next());
}

#[test]
fn cluster_from_sketch_two_cliques() {
    let dir = TempDir::new().unwrap();
    let g = gen(dir.path(), "g", &["clique-union", "--sizes", "6,6"]);
    let r = report(&run(&["cluster", s(&g), "--from-sketch"]));
    assert_eq!(r["clustering"]["cost"], 0);
    assert_eq!(r["clustering"]["k"], 2);
    let r = report(&run(&["cluster", s(&g), "--backend", "brute"]));
    assert_eq!(r["ok"], Value::Bool(false));
    assert!(r["error"].as_str().unwrap().contains("too large"));
}

#[test]
fn dynamic_stream_matches_offline() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("s");
    std::fs::write(&path, "0 1 +\n1 2 +\n0 1 \u{2212}\n2 3 +\n# comment\n3 4 +\n").unwrap();
    let out = run(&["stream", s(&path)]);
    assert!(out.status.success());
    let r = report(&out);
    assert_eq!(r["matches_offline"], Value::Bool(true));
    assert_eq!(r["events"], 5);
}

#[test]
fn insertion_stream_rejects_deletions() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("s");
    std::fs::write(&path, "0 1 +\n0 1 -\n").unwrap();
    let out = run(&["stream", s(&path), "--mode", "insertion"]);
    assert!(!out.status.success());
    let r = report(&out);
    assert_eq!(r["retryable"], Value::Bool(false));
    assert!(r["error"].as_str().unwrap().contains("position"));
}

#[test]
fn simulate_models_agree_with_offline() {
    let dir = TempDir::new().unwrap();
    let g = gen(dir.path(), "g", &["clique-union", "--sizes", "5,5", "--bridges", "1"]);
    let r = report(&run(&["simulate", s(&g), "--machines", "4"]));
    assert_eq!(r["ok"], Value::Bool(true));
    let r = report(&run(&["simulate", s(&g), "--mode", "mpc", "--machines", "3"]));
    assert_eq!(r["mpc"]["rounds"], 2);
    assert_eq!(r["mpc"]["matches_offline"], Value::Bool(true));
    let out = run(&["simulate", s(&g), "--mode", "mpc", "--machines", "3", "--cap", "16"]);
    assert!(!out.status.success());
    assert!(report(&out)["error"].as_str().unwrap().contains("cap"));
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let g = gen(dir.path(), "g", &["cycle", "--n", "6"]);
    assert!(run(&["verify", s(&g), s(&g)]).status.success());
    let doubled = dir.path().join("h");
    let text: String = std::fs::read_to_string(&g)
        .unwrap()
        .lines()
        .enumerate()
        .map(|(i, l)| if i == 0 { format!("{l}\n") } else { format!("{l} 2\n") })
        .collect();
    std::fs::write(&doubled, text).unwrap();
    let out = run(&["verify", s(&doubled), s(&g), "--eps", "0.5", "--kind", "spectral"]);
    assert!(!out.status.success());
    assert_eq!(report(&out)["ok"], Value::Bool(false));
}

#[test]
fn reports_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let g = gen(dir.path(), "g", &["random-gnp", "--n", "14", "--p", "0.4", "--seed", "9"]);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for r in [&a, &b] {
        let out = bin().args(["cluster", s(&g), "--from-sketch", "--report", s(r)]).env("DESPARSIFY_SEED", "5").output().unwrap();
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let r: Value = serde_json::from_slice(&std::fs::read(&a).unwrap()).unwrap();
    assert_eq!(r["config"]["seed"], 5);
}
