use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bmlattice")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn cube_text_report() {
    let o = run(&["analyze", "--graph", "hypercube:3", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("MM*+M*M  dim 20"), "{text}");
    assert!(text.contains("P = 5"));
}

#[test]
fn heptagon_passes_with_no_degenerate_pairs() {
    let o = run(&["analyze", "--graph", "cycle:7", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["pair_classification"]["p"], 0);
    assert!(v["verdicts"].as_array().unwrap().iter().all(|x| x["passed"] == true));
}

#[test]
fn json_is_deterministic_and_has_stable_keys() {
    let a = stdout(&run(&["analyze", "--graph", "johnson:6,3", "--format", "json", "--probe"]));
    let b = stdout(&run(&["analyze", "--graph", "johnson:6,3", "--format", "json", "--probe"]));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(a.trim()).unwrap();
    for key in ["graph", "base_vertex", "nodes", "edges", "pair_classification", "probe", "verdicts"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["nodes"].as_array().unwrap().len(), 8);
    assert_eq!(v["edges"].as_array().unwrap().len(), 9);
}

#[test]
fn all_vertices_emits_one_report_each() {
    let o = run(&["analyze", "--graph", "cycle:7", "--format", "json", "--all-vertices"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let vertices: Vec<u64> = text
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["base_vertex"].as_u64().unwrap())
        .collect();
    assert_eq!(vertices, (0..7).collect::<Vec<_>>());
}

#[test]
fn diagram_labels() {
    let dot = stdout(&run(&["diagram", "--graph", "hypercube:3"]));
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("rankdir=BT"));
    assert!(dot.contains(r#"label="MM*∩M*M\ndim=12""#), "{dot}");
    assert!(dot.contains(r#"label="ℂI\ndim=1""#));
    assert!(dot.contains(r#"n4 -> n5 [label="⊥dim=5"]"#), "{dot}");
    let dot = stdout(&run(&["diagram", "--graph", "cycle:7"]));
    assert!(dot.contains(r#"n4 -> n5 [label="⊥dim=0"]"#), "{dot}");
    assert!(dot.contains(r#"label="M+M*\ndim=7""#));
}

#[test]
fn diagram_with_probe_nodes() {
    let dot = stdout(&run(&["diagram", "--graph", "hamming:3,3", "--probe"]));
    assert!(dot.contains(r#"label="T\ndim=35""#), "{dot}");
    assert!(dot.contains("style=dotted"));
}

#[test]
fn verify_hamming_passes() {
    let o = run(&["verify", "--graph", "hamming:3,3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn verify_group_filter() {
    let text = stdout(&run(&["verify", "--graph", "hypercube:4", "--lemma", "5.1"]));
    let checks: Vec<&str> = text.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).collect();
    assert_eq!(checks.len(), 2);
    assert!(checks.iter().all(|l| l.starts_with("PASS [5.1]") && l.contains("625 identities")));
    let text = stdout(&run(&["verify", "--graph", "hypercube:3", "--lemma", "4.*"]));
    assert!(text.lines().filter(|l| l.starts_with("PASS")).all(|l| l.contains("[4.")));
}

#[test]
fn impossible_tolerance_fails_with_one() {
    let o = run(&["verify", "--graph", "cycle:7", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
    let o = run(&["analyze", "--graph", "cycle:7", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn input_errors_exit_two() {
    for args in [
        &["analyze", "--graph", "petersen:1"][..],
        &["analyze", "--graph", "hypercube:2"],
        &["analyze", "--graph", "cycle:7", "--vertex", "7"],
        &["analyze", "--edges", "/nonexistent/edges.txt"],
        &["analyze"],
        &["verify", "--graph", "cycle:7", "--lemma", "9.9"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn edge_list_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c7.txt");
    std::fs::write(&path, "0 1\n1 2\n2 3\n3 4\n4 5\n5 6\n6 0\n").unwrap();
    let o = run(&["analyze", "--edges", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("P = 0"));
    std::fs::write(&path, "0 1\n1 1\n").unwrap();
    let o = run(&["analyze", "--edges", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}
