use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn ampcg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ampcg")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const COLLIDER_WITH_TAIL: &str = "edge A -> B\nedge C -> B\nedge C -- D\n";
const CHAIN: &str = "edge A -> B\nedge B -> C\nedge A -> C\nedge C -- D\n";

#[test]
fn strong_reports_no_edges_on_collider_with_tail() {
    let dir = TempDir::new().unwrap();
    let eg = write(&dir, "eg.txt", COLLIDER_WITH_TAIL);
    let o = ampcg(&["strong", s(&eg)]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("0 strong edges"));

    let json: serde_json::Value =
        serde_json::from_slice(&ampcg(&["--format", "json", "strong", s(&eg)]).stdout).unwrap();
    assert_eq!(json["strong"], serde_json::json!([]));
}

#[test]
fn strong_marks_the_continuation_of_a_collider() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "edge A -> C\nedge B -> C\nedge C -> D\n");
    let text = stdout(&ampcg(&["strong", s(&g)]));
    assert!(text.contains("1 strong edges") && text.contains("strong C->D"), "{text}");
    let dot = stdout(&ampcg(&["--format", "dot", "strong", s(&g)]));
    assert!(dot.contains("\"C\" -> \"D\" [style=bold, color=red];"), "{dot}");
    let rules = stdout(&ampcg(&["strong", s(&g), "--rules-only"]));
    assert!(rules.contains("strong C->D"), "{rules}");
}

#[test]
fn class_of_a_single_edge_has_three_members() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "ab.txt", "edge A -- B\n");
    for via in ["brute", "merge-split"] {
        let o = ampcg(&["class", s(&g), "--via", via]);
        assert!(o.status.success());
        assert_eq!(stdout(&o), "3 members\nA--B\nA->B\nB->A\n");
    }
}

#[test]
fn bound_end_to_end() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", CHAIN);
    let data = dir.path().join("d.csv");
    let o = ampcg(&["--seed", "3", "sample", s(&g), "--n", "5000", "--out", s(&data)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(fs::read_to_string(&data).unwrap().starts_with("A,B,C,D\n"));

    let o = ampcg(&[
        "--format",
        "json",
        "bound",
        s(&g),
        "--data",
        s(&data),
        "--x",
        "A",
        "--y",
        "C",
        "--mode",
        "maxoriented",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let effects: Vec<f64> = r["entries"].as_array().unwrap().iter().map(|e| e["effect"].as_f64().unwrap()).collect();
    assert!(!effects.is_empty());
    let (lo, hi) = (r["lower"].as_f64().unwrap(), r["upper"].as_f64().unwrap());
    assert!(lo <= hi);
    assert!(effects.iter().all(|&e| lo <= e && e <= hi));
    assert!(effects.contains(&lo) && effects.contains(&hi));

    let text = stdout(&ampcg(&["bound", s(&g), "--data", s(&data), "--x", "A", "--y", "C", "--mode", "maxoriented"]));
    assert!(text.starts_with("effect of A on C\n") && text.contains("bounds ["), "{text}");
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", CHAIN);
    let d1 = dir.path().join("1.csv");
    let sample = ["--seed", "9", "sample", s(&g), "--n", "300", "--out", s(&d1)];
    let a = ampcg(&sample);
    let first_csv = fs::read(&d1).unwrap();
    let b = ampcg(&sample);
    assert_eq!(first_csv, fs::read(&d1).unwrap());
    assert_eq!(a.stdout, b.stdout);

    let runs: [&[&str]; 5] = [
        &["--format", "json", "eg", s(&g)],
        &["--format", "json", "strong", s(&g)],
        &["class", s(&g)],
        &["adjust", s(&g), "--x", "B", "--mode", "class"],
        &["bound", s(&g), "--data", s(&d1), "--x", "A", "--y", "C", "--mode", "class"],
    ];
    for args in runs {
        let first = ampcg(args);
        assert!(first.status.success(), "{args:?}");
        assert_eq!(first.stdout, ampcg(args).stdout, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "g.txt", "edge A -- B\nedge B -- C\n");
    let cyclic = write(&dir, "bad.txt", "edge A -> B\nedge B -- C\nedge C -> A\n");
    let garbled = write(&dir, "garbled.txt", "edge A => B\n");

    assert_eq!(ampcg(&["validate", s(&good)]).status.code(), Some(0));
    assert_eq!(ampcg(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(ampcg(&["sep", s(&good)]).status.code(), Some(1));
    assert_eq!(ampcg(&["validate", s(&dir.path().join("missing.txt"))]).status.code(), Some(1));
    assert_eq!(ampcg(&["--format", "dot", "sep", s(&good), "--x", "A", "--y", "C"]).status.code(), Some(1));
    let o = ampcg(&["validate", s(&cyclic)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("semidirected cycle"));
    assert_eq!(ampcg(&["validate", s(&garbled)]).status.code(), Some(2));
    assert_eq!(ampcg(&["sep", s(&good), "--x", "A", "--y", "Q"]).status.code(), Some(2));
    assert_eq!(ampcg(&["--max-edges", "1", "class", s(&good)]).status.code(), Some(3));
}

#[test]
fn separation_and_equivalence() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", COLLIDER_WITH_TAIL);
    let h = write(&dir, "h.txt", "edge A -> B\nedge C -> B\nedge D -> C\n");
    assert_eq!(stdout(&ampcg(&["sep", s(&g), "--x", "A", "--y", "D"])), "separated\n");
    assert_eq!(stdout(&ampcg(&["sep", s(&g), "--x", "A", "--y", "D", "--z", "B"])), "not separated\n");
    let k = write(&dir, "k.txt", "edge A -> B\nedge B -> C\nedge C -- D\n");
    assert_eq!(stdout(&ampcg(&["equiv", s(&g), s(&h)])), "equivalent\n");
    assert_eq!(stdout(&ampcg(&["equiv", s(&g), s(&k)])), "not equivalent\n");
    assert_eq!(stdout(&ampcg(&["components", s(&g)])), "{A}\n{C, D}\n{B}\n");
}

#[test]
fn oracle_prints_a_pass_table() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", CHAIN);
    let o = ampcg(&["oracle", s(&g)]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().all(|l| l.starts_with("PASS  ")), "{text}");
}

#[test]
fn minmax_modes() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", COLLIDER_WITH_TAIL);
    assert_eq!(stdout(&ampcg(&["minmax", s(&g), "--mode", "min"])), "A->B B--C C--D\nA--B C->B C--D\n");
    assert_eq!(stdout(&ampcg(&["minmax", s(&g), "--mode", "max"])), "A->B C->B C->D\n");
}
