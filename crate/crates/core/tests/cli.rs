use std::path::Path;
use std::process::{Command, Output};

fn nexcover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nexcover")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("exp.cfg");
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn generate_then_solve() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    let g = graph.to_str().unwrap();
    let gen = nexcover(&["generate", "--family", "barabasi-albert", "--n", "40", "--seed", "7", "--out", g]);
    assert!(gen.status.success(), "{}", String::from_utf8_lossy(&gen.stderr));

    let a = nexcover(&["solve", "--graph", g]);
    let b = nexcover(&["solve", "--graph", g]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("node,cost,x,selected"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 40);
    assert!(rows.iter().any(|r| r.ends_with(",true")));

    let degree = nexcover(&["solve", "--graph", g, "--cost", "degree"]);
    assert!(degree.status.success());
}

#[test]
fn small_static_bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("res");
    let o = nexcover(&[
        "bench-static", "--sizes", "20,30", "--trials", "2", "--methods", "l1-centrality,greedy-degree",
        "--seed", "5", "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("static.csv")).unwrap();
    let rows = csv.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, 1 + 2 * 2 * 2);
    assert!(out.join("static_summary.csv").exists());
}

#[test]
fn invalid_config_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write_config(dir.path(), "sizes = 10\nbogus = 1\n");
    let o = nexcover(&["bench-static", "--config", &unknown]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let o = nexcover(&["bench-static", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = nexcover(&["solve", "--delta", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solver_failure_exits_with_3_after_recording_the_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("res");
    let cfg = write_config(dir.path(), "sizes = 60\ntrials = 1\nmethods = l1-centrality\nmax_iterations = 1\n");
    let o = nexcover(&["bench-static", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("static.csv")).unwrap();
    let last = csv.lines().last().unwrap();
    assert!(last.ends_with("false"), "{last}");
}
