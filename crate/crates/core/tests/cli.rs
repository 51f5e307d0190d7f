mod common;

use std::path::Path;
use std::process::{Command, Output};

use bjkit::cnf::parse_dimacs;
use bjkit::trace::{Event, TraceEvent};

fn bjkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bjkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn read_trace(path: &Path) -> Vec<TraceEvent> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn unsat_formula_exits_20_with_json_stats() {
    let o = bjkit(&["sat", "solve", &fixture("contradiction.cnf"), "--strategy", "last-uip", "--k", "8", "--stats", "json"]);
    assert_eq!(o.status.code(), Some(20));
    assert!(stdout(&o).contains("s UNSATISFIABLE"));
    let stats: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(stats["decisions"], 0);
    assert!(stats.get("wall_time_ms").is_some());
}

#[test]
fn colouring_with_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.jsonl");
    let o = bjkit(&["color", "solve", &fixture("six_vertex.json"), "--trace", trace.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(10));
    assert!(stdout(&o).contains("v 1=red 2=green 3=green 4=red 5=red 6=red"));
    let events = read_trace(&trace);
    assert!(matches!(events.last().unwrap().event, Event::Solution));
    assert!(events.windows(2).all(|w| w[0].seq + 1 == w[1].seq));
}

#[test]
fn uncolourable_exits_20() {
    let o = bjkit(&["color", "solve", &fixture("k3.json")]);
    assert_eq!(o.status.code(), Some(20));
}

#[test]
fn gen_output_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.cnf");
    let o = bjkit(&["gen", "3sat", "-n", "50", "-m", "215", "--seed", "7", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let inst = parse_dimacs(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(inst.var_count, 50);
    assert_eq!(inst.clauses.len(), 215);
}

#[test]
fn assume_script_and_dot_export() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("g.dot");
    let trace = dir.path().join("t.jsonl");
    let o = bjkit(&[
        "sat", "solve", &fixture("eight_var.cnf"),
        "--strategy", "last-uip",
        "--assume", "v7=false,v8=false,v1=true",
        "--dot", dot.to_str().unwrap(),
        "--trace", trace.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(10));
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.contains("x4 -> kappa;"));
    let throw = read_trace(&trace)
        .into_iter()
        .find(|e| matches!(e.event, Event::Throw { .. }))
        .unwrap();
    let line = serde_json::to_string(&throw).unwrap();
    assert!(line.contains(r#""target":2"#), "{line}");
    assert!(line.contains(r#""clause":[-1,8,7]"#), "{line}");
}

#[test]
fn dot_is_refused_without_a_conflict() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("one.cnf");
    std::fs::write(&cnf, "p cnf 1 0\n").unwrap();
    let dot = dir.path().join("g.dot");
    let o = bjkit(&["sat", "solve", cnf.to_str().unwrap(), "--dot", dot.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(10));
    assert!(!dot.exists());
    assert!(String::from_utf8_lossy(&o.stderr).contains("no conflict"));
}

#[test]
fn enumerate_counts_models() {
    let o = bjkit(&["sat", "enumerate", &fixture("eight_var.cnf"), "--strategy", "none"]);
    let plain = stdout(&o);
    let o2 = bjkit(&["sat", "enumerate", &fixture("eight_var.cnf")]);
    let learning = stdout(&o2);
    let count = |s: &str| s.lines().filter(|l| l.starts_with("v ")).count();
    assert_eq!(count(&plain), count(&learning));
    let f = common::eight_var();
    let expected = (0u32..256)
        .filter(|a| {
            let m = bjkit::cnf::Model::new((1..=8).map(|v| a & (1 << (8 - v)) != 0).collect());
            f.is_satisfied_by(&m)
        })
        .count();
    assert_eq!(count(&plain), expected);
}

#[test]
fn text_stats_and_vanilla_learn_nothing() {
    let o = bjkit(&["sat", "solve", &fixture("eight_var.cnf"), "--strategy", "none", "--stats", "text"]);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["learnt_count", "0"]));
    assert!(err.contains("jumps"));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(bjkit(&["sat"]).status.code(), Some(1));
    assert_eq!(bjkit(&["sat", "solve", "/no/such.cnf"]).status.code(), Some(1));
    assert_eq!(bjkit(&["sat", "solve", &fixture("eight_var.cnf"), "--assume", "v9=true"]).status.code(), Some(1));
    assert_eq!(bjkit(&["--help"]).status.code(), Some(0));
}
