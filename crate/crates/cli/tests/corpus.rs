use std::path::{Path, PathBuf};
use std::process::Command;

use gauge_ca_cli::{parse_scenario, render_scenario};

fn scenarios(dir: &Path) -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "scn"))
        .collect();
    files.sort();
    files
}

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn corpus_round_trips() {
    let files = scenarios(&root().join("scenarios"));
    assert!(files.len() >= 10);
    for path in files {
        let parsed = parse_scenario(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let rendered = render_scenario(&parsed);
        assert_eq!(parse_scenario(&rendered).unwrap(), parsed, "{}", path.display());
        assert_eq!(render_scenario(&parse_scenario(&rendered).unwrap()), rendered);
    }
}

#[test]
fn malformed_files_report_expected_line() {
    let files = scenarios(&root().join("scenarios/malformed"));
    assert_eq!(files.len(), 5);
    for path in files {
        let text = std::fs::read_to_string(&path).unwrap();
        let expected: usize = text
            .lines()
            .find_map(|l| l.strip_prefix("# expect-line:"))
            .expect("malformed files declare the failing line")
            .trim()
            .parse()
            .unwrap();
        let err = parse_scenario(&text).unwrap_err();
        assert_eq!(err.line, expected, "{}: {err}", path.display());
        assert!(err.to_string().starts_with(&format!("line {expected}, column ")));
    }
}

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gauge-ca"))
        .args(args)
        .current_dir(root())
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn exit_status_follows_check_outcomes() {
    let (code, stdout, _) = run_cli(&["check", "scenarios/fig9b.scn"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.lines().count(), 2);
    assert!(stdout.lines().all(|l| l.starts_with("PASS ")));

    let (code, stdout, _) = run_cli(&["check", "scenarios/bare.scn"]);
    assert_eq!(code, 1);
    assert!(stdout
        .lines()
        .all(|l| l.starts_with("FAIL ") && l.contains(" witness=")));

    let (code, stdout, stderr) = run_cli(&["check", "scenarios/malformed/unknown-key.scn"]);
    assert_eq!(code, 2);
    assert!(stdout.is_empty());
    assert!(stderr.contains("line 4"));

    let (code, _, _) = run_cli(&["check", "scenarios/does-not-exist.scn"]);
    assert_eq!(code, 2);
}

#[test]
fn simulate_flags() {
    let (code, stdout, _) = run_cli(&["simulate", "scenarios/fig6a.scn", "--steps", "2"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("   2 |.. .. .. .# .. .. .. .."));
    assert!(!stdout.contains("   3 |"));

    let (code, stdout, _) = run_cli(&[
        "simulate",
        "scenarios/quantum-ring.scn",
        "--format",
        "svg",
        "--steps",
        "3",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("<svg"));

    let out = std::env::temp_dir().join(format!("gauge-ca-{}.txt", std::process::id()));
    let (code, stdout, _) = run_cli(&["simulate", "scenarios/fig6a.scn", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let golden = std::fs::read_to_string(root().join("tests/golden/fig6a.txt")).unwrap();
    assert_eq!(std::fs::read_to_string(&out).unwrap(), golden);
    std::fs::remove_file(out).unwrap();
}

#[test]
fn seed_override_changes_sampling_only() {
    let (a, out_a, _) = run_cli(&["check", "scenarios/abelian-checks.scn", "--seed", "1"]);
    let (b, out_b, _) = run_cli(&["check", "scenarios/abelian-checks.scn", "--seed", "1"]);
    assert_eq!((a, b), (0, 0));
    assert_eq!(out_a, out_b);
}
