use semistrong_core::io::{parse_coloring, parse_edge_list};
use semistrong_core::verify_semistrong;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_semistrong"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn gen(family: &str, extra: &[&str]) -> String {
    let mut args = vec!["gen", "--family", family];
    args.extend_from_slice(extra);
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn gen_then_color_produces_a_valid_certificate() {
    let text = gen("petersen", &[]);
    let o = run_stdin(&["color", "--mode", "semistrong"], &text);
    assert_eq!(o.status.code(), Some(0));
    let doc = parse_coloring(&stdout(&o)).unwrap();
    let g = parse_edge_list(&text).unwrap();
    assert_eq!(doc.graph().unwrap(), g);
    assert!(doc.valid);
    assert_eq!(doc.kappa1, 0);
    assert!(doc.colors_used <= 8);
    assert!(verify_semistrong(&g, &doc.coloring().unwrap()).valid);
}

#[test]
fn color_output_is_byte_stable() {
    let text = gen("random", &["--n", "12", "--d", "4", "--seed", "9"]);
    let a = run_stdin(&["color"], &text);
    let b = run_stdin(&["color"], &text);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).ends_with('\n'));
}

#[test]
fn graph6_input_and_output_files() {
    let dir = tempfile::tempdir().unwrap();
    let g6 = dir.path().join("q3.g6");
    let out = dir.path().join("q3.json");
    let o = run(&["gen", "--family", "hypercube", "--n", "3", "--format", "graph6", "--output", g6.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["color", "--format", "graph6", "--input", g6.to_str().unwrap(), "--output", out.to_str().unwrap(), "--mode", "relaxed01"]);
    assert_eq!(o.status.code(), Some(0));
    let doc = parse_coloring(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(doc.mode, "relaxed01");
    assert!(doc.valid);
    assert_eq!(doc.edges.len(), 12);
}

#[test]
fn verify_reports_witness_and_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write(dir.path(), "c4.txt", "4 4\n0 1\n1 2\n2 3\n3 0\n");
    let good = write(dir.path(), "good.txt", "1 2 3 4\n");
    let bad = write(dir.path(), "bad.txt", "1 2 1 2\n");

    let o = run(&["verify", "--mode", "semistrong", "--graph", &graph, "--coloring", &good]);
    assert_eq!(o.status.code(), Some(0));
    assert!(parse_coloring(&stdout(&o)).unwrap().valid);

    let o = run(&["verify", "--mode", "semistrong", "--graph", &graph, "--coloring", &bad]);
    assert_eq!(o.status.code(), Some(1));
    let doc = parse_coloring(&stdout(&o)).unwrap();
    assert!(!doc.valid);
    assert!(doc.witness.is_some());

    let o = run(&["verify", "--mode", "relaxed01", "--graph", &graph, "--coloring", &bad]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["verify", "--mode", "relaxed", "--s", "0", "--t", "0", "--graph", &graph, "--coloring", &bad]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_accepts_a_color_document() {
    let dir = tempfile::tempdir().unwrap();
    let text = gen("prism", &["--n", "5"]);
    let graph = write(dir.path(), "p5.txt", &text);
    let o = run_stdin(&["color"], &text);
    let cert = write(dir.path(), "p5.json", &stdout(&o));
    let o = run(&["verify", "--mode", "semistrong", "--graph", &graph, "--coloring", &cert]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn exact_values_and_infeasible_at_max() {
    let c4 = "4 4\n0 1\n1 2\n2 3\n3 0\n";
    let o = run_stdin(&["exact", "--mode", "semistrong", "--max-colors", "6"], c4);
    assert_eq!(o.status.code(), Some(0));
    let doc = parse_coloring(&stdout(&o)).unwrap();
    assert_eq!(doc.value, Some(4));

    let o = run_stdin(&["exact", "--mode", "relaxed01", "--max-colors", "6", "--budget-nodes", "100000"], c4);
    assert_eq!(parse_coloring(&stdout(&o)).unwrap().value, Some(2));

    let o = run_stdin(&["exact", "--mode", "semistrong", "--max-colors", "3"], c4);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "infeasible_at_max");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["gen", "--family", "dodecahedron"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "--family", "cycle", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["color", "--bogus"]).status.code(), Some(2));
    assert_eq!(run_stdin(&["color"], "3 2\n0 1\n").status.code(), Some(2));
    assert_eq!(run_stdin(&["color"], "2 1\n0 0\n").status.code(), Some(2));
    assert_eq!(run_stdin(&["color", "--format", "graph6"], "~~~\n").status.code(), Some(2));
    let c4 = "4 4\n0 1\n1 2\n2 3\n3 0\n";
    let args = ["exact", "--mode", "strong", "--max-colors", "4", "--budget-secs", "1", "--budget-nodes", "5"];
    assert_eq!(run_stdin(&args, c4).status.code(), Some(2));
    assert_eq!(run(&["color", "--input", "/nonexistent/graph.txt"]).status.code(), Some(2));
}

#[test]
fn batch_writes_a_row_per_graph() {
    let dir = tempfile::tempdir().unwrap();
    let graphs = dir.path().join("graphs");
    fs::create_dir(&graphs).unwrap();
    write(&graphs, "petersen.txt", &gen("petersen", &[]));
    write(&graphs, "c5.txt", &gen("cycle", &["--n", "5"]));
    write(&graphs, "small.g6", "C~\nBg\n");
    let report = dir.path().join("report.csv");
    let o = run(&["batch", "--dir", graphs.to_str().unwrap(), "--report", report.to_str().unwrap(), "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let mut reader = csv::Reader::from_path(&report).unwrap();
    let headers = reader.headers().unwrap().clone();
    assert_eq!(&headers[0], "graph_id");
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    let ids: Vec<&str> = rows.iter().map(|r| r.get(0).unwrap()).collect();
    assert_eq!(ids, ["c5.txt", "petersen.txt", "small.g6:1", "small.g6:2"]);
    let valid = headers.iter().position(|h| h == "valid").unwrap();
    assert!(rows.iter().all(|r| &r[valid] == "true"));

    write(&graphs, "broken.txt", "5 1\n0\n");
    let o = run(&["batch", "--dir", graphs.to_str().unwrap(), "--report", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let text = fs::read_to_string(&report).unwrap();
    assert_eq!(text.lines().count(), 6);
}
