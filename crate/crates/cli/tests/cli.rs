use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treeproj"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn width_of_worked_example() {
    let hq0 = fixture("hq0.hg");
    let o = run(&["width", "--method", "hw", "--kmax", "4", path(&hq0)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("hw = 2"));
    assert!(stdout(&o).contains("root "));
}

#[test]
fn width_json_mirrors_text() {
    let hq0 = fixture("hq0.hg");
    let o = run(&["--json", "width", "--method", "ghw", path(&hq0)]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["width"], 2);
    assert_eq!(v["method"], "ghw");
    assert!(!v["bags"].as_array().unwrap().is_empty());
}

#[test]
fn width_above_kmax_is_a_false_decision() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write(dir.path(), "tri.hg", "a(x,y)\nb(y,z)\nc(z,x)\n");
    let o = run(&["width", "--kmax", "1", path(&tri)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "gr-hw > 1\n");
}

#[test]
fn decompose_without_projection_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write(dir.path(), "tri.hg", "a(x,y)\nb(y,z)\nc(z,x)\n");
    let o = run(&["decompose", path(&tri), path(&tri)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("no greedy winning strategy"));
}

#[test]
fn decompose_writes_a_projection_that_checks() {
    let dir = tempfile::tempdir().unwrap();
    let (h1, h2) = (fixture("strict_witness_h1.hg"), fixture("strict_witness_h2.hg"));
    let ha = dir.path().join("ha.hg");
    let o = run(&["decompose", path(&h1), path(&h2), "--out", path(&ha)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("% rewrites "));
    let o = run(&["check", path(&h1), path(&h2), path(&ha)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    // H2 closes the cycle v0 v4 v1 v5 through x0
    let o = run(&["check", path(&h1), path(&h2), path(&h2)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("not a tree projection"));
}

#[test]
fn game_separates_greedy_from_monotone() {
    let (h1, h2) = (fixture("strict_witness_h1.hg"), fixture("strict_witness_h2.hg"));
    let o = run(&["game", path(&h1), path(&h2)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("greedy captain: wins"));
    let o = run(&["game", "--monotone", path(&h1), path(&h2)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("monotone marshal: loses"));
}

#[test]
fn game_trace_labels_escape_doors_and_is_stable() {
    let (h1, h2) = (fixture("strict_witness_h1.hg"), fixture("strict_witness_h2.hg"));
    let args = ["game", "--trace", "--dot", path(&h1), path(&h2)];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    for section in ["# strategy", "# nice strategy", "# component graph", "# rewrites", "# monotone component graph"] {
        assert!(text.contains(section), "missing {section}");
    }
    assert!(text.contains("escape-door {"));
    assert!(text.contains("digraph components"));
}

#[test]
fn answer_over_csv_directory() {
    let dir = tempfile::tempdir().unwrap();
    let db = dir.path().join("db");
    std::fs::create_dir(&db).unwrap();
    write(&db, "e.csv", "1,2\n2,3\n3,1\n");
    let q = write(dir.path(), "q.cq", "ans(X,Z) :- e(X,Y), e(Y,Z), e(Z,X).\n");
    let o = run(&["answer", path(&q), path(&db)]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('%')).collect();
    assert!(text.starts_with("% 3 answers, k = 2"), "{text}");
    assert_eq!(rows, ["1,3", "2,1", "3,2"]);

    let out = dir.path().join("ans.csv");
    let o = run(&["answer", path(&q), path(&db), "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "1,3\n2,1\n3,2\n");

    // kmax 1 leaves the triangle without a projection
    let o = run(&["answer", "--kmax", "1", path(&q), path(&db)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn check_diff_prints_a_passing_table() {
    let o = run(&["check", "--diff", "--seed", "7", "--count", "15"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("seed 7 count 15\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 10);
    assert_eq!(run(&["check", "--diff", "--seed", "7", "--count", "15"]).stdout, o.stdout);
}

#[test]
fn gen_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for d in [&a, &b] {
        let o = run(&["gen", "--seed", "11", "--nodes", "7", "--edges", "5", "--mode", "augment:2", "--out", path(d)]);
        assert_eq!(o.status.code(), Some(0));
    }
    for f in ["h1.hg", "h2.hg"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap());
    }
    let o = run(&["decompose", path(&a.join("h1.hg")), path(&a.join("h2.hg"))]);
    assert!(matches!(o.status.code(), Some(0 | 1)));
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(run(&["width", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["width", "/no/such/file.hg"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "--nodes", "9", "--edges", "1", "--max-arity", "3"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.hg", "a(x,\n");
    let o = run(&["width", path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: "));
}
