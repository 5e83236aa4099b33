use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn zsram(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zsram"))
        .args(args)
        .env_remove("ZSRAM_THREADS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn ramsey_exit_codes() {
    let ok = zsram(&["ramsey", "C4", "Z2"]);
    assert_eq!(code(&ok), 0);
    let text = stdout(&ok);
    assert_eq!(text.lines().next(), Some("4"));
    assert_eq!(text.lines().nth(1), Some("graph,group,t,verdict,runtime,colorings_examined"));
    assert!(String::from_utf8_lossy(&ok.stderr).starts_with("# "));

    assert_eq!(code(&zsram(&["ramsey", "C4", "Z3"])), 1);
    assert_eq!(code(&zsram(&["ramsey", "nosuchgraph.json", "Z2"])), 1);
    assert_eq!(code(&zsram(&["ramsey", "2K2", "Z2", "--tmax", "4"])), 2);
    assert_eq!(code(&zsram(&["ramsey", "C4", "Z2", "--max-colourings", "10"])), 2);
    assert_eq!(code(&zsram(&["--help"])), 0);
}

#[test]
fn ramsey_json_output() {
    let o = zsram(&["--json", "ramsey", "P3", "Z2", "--tmax", "6"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["outcome"]["verdict"], "exact");
    assert_eq!(v["outcome"]["value"], 3);
    assert!(v["colorings_examined"].is_string());
}

#[test]
fn thread_count_does_not_change_results() {
    let strip = |o: &Output| {
        let mut v: Value = serde_json::from_str(stdout(o).trim()).unwrap();
        v.as_object_mut().unwrap().remove("runtime_s");
        v
    };
    let args = ["--json", "ramsey", "C4", "Z2", "--tmax", "6"];
    let default = zsram(&args);
    let single = zsram(&[&["--threads", "1"][..], &args[..]].concat());
    assert_eq!(strip(&default), strip(&single));
    let via_env = Command::new(env!("CARGO_BIN_EXE_zsram"))
        .args(args)
        .env("ZSRAM_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&via_env), 0);
    assert_eq!(strip(&default), strip(&via_env));
}

#[test]
fn generated_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    assert_eq!(code(&zsram(&["gen", "matching", "3", "--out", path(&g)])), 0);
    let graph = zsram::io::read_graph(&g).unwrap();
    assert_eq!(graph, zsram::graphs::generate::matching(3).unwrap());

    let c = dir.path().join("c.json");
    let o = zsram(&["gen", "coloring", "--group", "Z2xZ2", "--t", "9", "--seed", "3", "--out", path(&c)]);
    assert_eq!(code(&o), 0);
    let col = zsram::io::read_colouring(&c).unwrap();
    assert_eq!((col.t(), col.group().to_string()), (9, "Z2xZ2".to_string()));
    let again = stdout(&zsram(&["gen", "coloring", "--group", "Z2xZ2", "--t", "9", "--seed", "3"]));
    assert_eq!(zsram::io::parse_colouring(&again).unwrap(), col);

    assert_eq!(code(&zsram(&["gen", "hypercube", "3"])), 1);
    assert_eq!(code(&zsram(&["gen", "coloring", "--t", "5"])), 1);
}

#[test]
fn embed_planted_instance() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c.json");
    let transcript = dir.path().join("rounds.jsonl");
    let o = zsram(&["gen", "planted", "--graph", "C4", "--group", "Z2", "--t", "40", "--seed", "1", "--out", path(&c)]);
    assert_eq!(code(&o), 0);
    let o = zsram(&[
        "embed", "C4", path(&c), "--alpha", "10", "--beta", "20", "--lambda", "2", "--transcript", path(&transcript),
    ]);
    let text = stdout(&o);
    let v: Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(code(&o), 0, "{text}");
    assert_eq!(v["status"], "success");
    assert_eq!(v["verified_certificate"], "(0)");
    let f: Vec<usize> = serde_json::from_value(v["injection"].clone()).unwrap();
    assert_eq!(f.len(), 4);
    let col = zsram::io::read_colouring(&c).unwrap();
    let graph = zsram::graphs::generate::cycle(4).unwrap();
    assert_eq!(zsram::oracle::copy_sum(&graph, &col, &f).unwrap(), 0);
    let rounds = std::fs::read_to_string(&transcript).unwrap();
    assert!(!rounds.is_empty());
    assert!(rounds.lines().all(|l| serde_json::from_str::<Value>(l).is_ok()));
}

#[test]
fn embed_failure_and_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c.json");
    std::fs::write(&c, r#"{"group": "Z2", "t": 12, "all": "(1)"}"#).unwrap();
    // three edges of colour 1 can never sum to zero
    let o = zsram(&["embed", "P4", path(&c)]);
    assert_eq!(code(&o), 3, "{}", stdout(&o));
    std::fs::write(&c, r#"{"group": "Z2", "t": 3, "all": "(1)"}"#).unwrap();
    assert_eq!(code(&zsram(&["embed", "C4", path(&c)])), 1);
    std::fs::write(&c, "not json").unwrap();
    assert_eq!(code(&zsram(&["embed", "C4", path(&c)])), 1);
}

#[test]
fn check_exit_codes() {
    let ok = zsram(&["check", "kneser,egz", "--max-order", "4", "--random", "200"]);
    assert_eq!(code(&ok), 0, "{}", stdout(&ok));
    let bad = zsram(&["check", "egz", "--random", "200", "--fault"]);
    assert_eq!(code(&bad), 5);
    assert!(stdout(&bad).contains("counterexample:"));
    assert_eq!(code(&zsram(&["check", "nonsense"])), 1);
}
