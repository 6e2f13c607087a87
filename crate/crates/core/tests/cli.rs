use std::path::Path;
use std::process::{Command, Output};

use kbracket::chords::{self, ChordDiagram};
use kbracket::graphs::{self, Graph};
use kbracket::Diagram;

fn kbracket(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kbracket"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn generated_diagram_feeds_bracket_and_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let out = kbracket(&["generate", "diagram", "pretzel", "2", "-2", "-3"]);
    assert!(out.status.success());
    let d = Diagram::from_json_str(&stdout(&out)).unwrap();
    assert_eq!(d.crossing_count(), 7);
    let file = write(dir.path(), "p.json", &stdout(&out));

    let out = kbracket(&["bracket", &file]);
    let want = d.bracket().unwrap();
    assert!(stdout(&out).starts_with(&format!("{want}, span={}", want.span().unwrap())));

    let out = kbracket(&["analyze", &file]);
    let text = stdout(&out);
    assert!(text.contains("a_M: 0\n"), "{text}");
    assert!(
        text.contains("a_M-4: -1\n") || text.contains("a_M-4: 1\n"),
        "{text}"
    );
    assert!(text.contains("full bracket agrees: yes"));

    let out = kbracket(&["--format", "json", "analyze", &file]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["crossings"], 7);
}

#[test]
fn graph_f_and_realize() {
    let dir = tempfile::tempdir().unwrap();
    let out = kbracket(&["generate", "graph", "G", "2"]);
    let g = Graph::parse(&stdout(&out)).unwrap();
    let file = write(dir.path(), "g.txt", &stdout(&out));
    assert_eq!(stdout(&kbracket(&["graph-f", &file])).trim(), "3");

    let out = kbracket(&["realize", &file, "--circles", "2"]);
    assert!(out.status.success());
    let cd = ChordDiagram::from_json_str(&stdout(&out)).unwrap();
    assert!(graphs::graphs_isomorphic(
        &chords::interlacement_graph(&cd),
        &g
    ));
}

#[test]
fn exit_codes() {
    assert_eq!(kbracket(&["verify", "thm2", "r=1"]).status.code(), Some(0));
    assert_eq!(kbracket(&["verify", "thm6", "r=2"]).status.code(), Some(1));
    assert_eq!(kbracket(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(
        kbracket(&["--limit", "31", "verify", "thm1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        kbracket(&["--workers", "0", "verify", "thm1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        kbracket(&["bracket", "/no/such/file"]).status.code(),
        Some(2)
    );
    assert_eq!(kbracket(&["--help"]).status.code(), Some(0));
}

#[test]
fn limit_guards_large_diagrams() {
    let dir = tempfile::tempdir().unwrap();
    let out = kbracket(&["generate", "diagram", "D", "2"]);
    let file = write(dir.path(), "d2.json", &stdout(&out));
    let out = kbracket(&["--limit", "20", "bracket", &file]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--limit"));
    // the Lando route still works past the limit
    let text = stdout(&kbracket(&["--limit", "20", "analyze", &file]));
    assert!(
        text.contains("a_M: 3\n") && text.contains("a_m: 1\n"),
        "{text}"
    );
}
