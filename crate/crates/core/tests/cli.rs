use std::process::{Command, Output};

use smop::cli::parse_synth;
use smop::data::{libsvm_write, synth_instance};
use smop::driver::ResultDoc;

fn smop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smop"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn strip_wall_ms(json: &str) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(json).unwrap();
    v.as_object_mut().unwrap().remove("wall_ms");
    v
}

#[test]
fn solve_synthetic_lasso() {
    let synth = "m=4,n=8,s=2,seed=7";
    let out = smop(&["solve", "--synth", synth, "--reg", "l1", "--c", "0.3", "--method", "smop"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: ResultDoc = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(doc.eta <= 1e-6);
    assert!(doc.converged);

    // η recomputed from x* and regenerated data
    let (data, _) = synth_instance(&parse_synth(synth).unwrap()).unwrap();
    let eta = doc.revalidate_eta(&data.a, &data.b).unwrap();
    assert!((eta - doc.eta).abs() <= 1e-12);
}

#[test]
fn solve_is_deterministic() {
    let args = ["solve", "--synth", "m=30,n=90,s=5,seed=3", "--reg", "slope", "--c", "0.2"];
    let a = smop(&args);
    let b = smop(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(strip_wall_ms(&stdout(&a)), strip_wall_ms(&stdout(&b)));
}

#[test]
fn usage_errors_exit_one() {
    let out = smop(&["solve", "--synth", "m=4,n=8,s=2,seed=7", "--c", "1.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("require 0 < ρ < ‖b‖"), "{}", stderr(&out));

    let out = smop(&["solve", "--synth", "m=4,n=8,s=2,seed=7", "--c", "0.3", "--method", "nmop", "--reg", "slope"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("NMOP supports l1 only"));

    let out = smop(&["solve", "--input", "/nonexistent/data.svm", "--c", "0.3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("/nonexistent/data.svm"));

    let out = smop(&["solve", "--c", "0.3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn solve_from_libsvm_file_with_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let (data, _) = synth_instance(&parse_synth("m=20,n=50,s=4,seed=2").unwrap()).unwrap();
    let input = dir.path().join("d.svm");
    libsvm_write(&data, &input).unwrap();
    let json = dir.path().join("r.json");
    let iters = dir.path().join("it.csv");
    let out = smop(&[
        "solve",
        "--input",
        input.to_str().unwrap(),
        "--c",
        "0.25",
        "--method",
        "nmop",
        "--out",
        json.to_str().unwrap(),
        "--iterates",
        iters.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: ResultDoc = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc.n_subproblems + 1, std::fs::read_to_string(&iters).unwrap().lines().count());
}

#[test]
fn rootdemo_tables() {
    for name in ["beta:1.1", "beta:1.5", "beta:2.1", "constructed"] {
        let out = smop(&["rootdemo", name, "--check"]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", stderr(&out));
    }
    let out = smop(&["rootdemo", "constructed"]);
    let text = stdout(&out);
    assert!(text.contains("1.7e-1\t3.6e-2\t4.0e-3"), "{text}");
    assert!(text.contains("f(x)\t1.9e-1"));
    assert_eq!(smop(&["rootdemo", "beta:9"]).status.code(), Some(1));
}

#[test]
fn path_command_emits_every_point() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("p.csv");
    let json = dir.path().join("p.json");
    let out = smop(&[
        "path",
        "--synth",
        "m=30,n=80,s=4,seed=5",
        "--c",
        "0.2",
        "--count",
        "6",
        "--out",
        csv.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 7);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["results"].as_array().unwrap().len(), 6);
    assert_eq!(v["summary"]["points"], 6);
}

#[derive(Debug, serde::Deserialize)]
struct Row {
    seed: u64,
    method: String,
    n_subproblems: usize,
    converged: bool,
}

fn read_rows(path: &std::path::Path) -> Vec<Row> {
    csv::Reader::from_path(path)
        .unwrap()
        .deserialize()
        .map(|r| r.unwrap())
        .collect()
}

#[test]
fn bench_secant_beats_bisection_on_every_seed() {
    let dir = tempfile::tempdir().unwrap();
    let runs = dir.path().join("runs.csv");
    let summary = dir.path().join("summary.csv");
    let out = smop(&[
        "bench",
        "--seeds",
        "1..5",
        "--methods",
        "smop,bmop",
        "--stoptol",
        "1e-8",
        "--jobs",
        "2",
        "--out",
        runs.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let rows = read_rows(&runs);
    assert_eq!(rows.len(), 10);
    for seed in 1..=5 {
        let evals = |m: &str| {
            rows.iter()
                .find(|r| r.seed == seed && r.method == m)
                .map(|r| r.n_subproblems)
                .unwrap()
        };
        assert!(evals("smop") < evals("bmop"), "seed {seed}");
    }
    assert!(rows.iter().all(|r| r.converged));
    let text = std::fs::read_to_string(&summary).unwrap();
    assert!(text.starts_with("method,runs,median_evals"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn bench_path_and_empty_suite() {
    let dir = tempfile::tempdir().unwrap();
    let runs = dir.path().join("runs.csv");
    let out = smop(&[
        "bench",
        "--suite",
        "m=1,n=1,s=1",
        "--seeds",
        "4",
        "--methods",
        "smop",
        "--path",
        "T=10",
        "--out",
        runs.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(read_rows(&runs).len(), 10);

    let out = smop(&["bench", "--seeds", ""]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("empty suite"));
}
