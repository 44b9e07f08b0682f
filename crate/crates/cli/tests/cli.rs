use std::path::PathBuf;
use std::process::{Command, Output};

use clap::Parser;
use mtfib_cli::report::Report;
use mtfib_cli::{execute, Cli};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mtfib"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn trivial_f2_has_one_sphere() {
    let out = stdout(&["analyze", &data("f2xz.aut.txt")]);
    assert!(out.contains("spheres (1):"), "{out}");
    assert!(out.contains("n = 2"));
}

#[test]
fn bad_token_is_a_parse_error() {
    let out = run(&["analyze", &data("bad_token.aut.txt")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2, column 7"), "{err}");
}

#[test]
fn missing_file_is_a_parse_error() {
    let out = run(&["analyze", "/nonexistent/input.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn circle_has_two_spheres() {
    let out = stdout(&["analyze", &data("circle2.map.txt")]);
    assert!(out.contains("spheres (2):"), "{out}");
}

#[test]
fn product_rank_five() {
    let out = stdout(&[
        "fiber",
        &data("f3xz.aut.txt"),
        "--phi",
        "x1=1,x2=1,x3=1,t=2",
    ]);
    assert!(out.contains("rank 5"), "{out}");
}

#[test]
fn killed_stable_letter_is_not_in_sigma() {
    let out = stdout(&["fiber", &data("f2xz.aut.txt"), "--phi", "x1=1,x2=0,t=0"]);
    assert!(
        out.contains("not in Σ(G); kernel virtually surjects onto F∞"),
        "{out}"
    );
}

#[test]
fn character_failing_a_relator_exits_3() {
    let out = run(&[
        "fiber",
        &data("transvection.aut.txt"),
        "--phi",
        "x1=1,x2=0,t=0",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn khramtsov_kappa_epsilon() {
    let out = stdout(&["gbs", &data("khramtsov.gbs.txt")]);
    assert!(out.contains("κ = 4"), "{out}");
    assert!(out.contains("ε = 3"), "{out}");
    let out = stdout(&["gbs", &data("khramtsov.gbs.txt"), "--enumerate", "3"]);
    assert!(out.contains("monodromy order 12"), "{out}");
    assert!(out.contains("fiber rank 10 (oracle 10)"), "{out}");
}

#[test]
fn rose_with_unit_labels_has_kappa_one() {
    let out = stdout(&["gbs", &data("f2xz.gbs.txt")]);
    assert!(out.contains("κ = 1"), "{out}");
}

#[test]
fn trivial_center_notes() {
    let out = stdout(&["gbs", &data("bs23.gbs.txt")]);
    assert!(out.contains("center trivial, Σ(G) = ∅"), "{out}");
    let out = stdout(&["gbs", &data("bs12.gbs.txt")]);
    assert!(out.contains("center trivial"), "{out}");
    assert!(out.contains("ascending"), "{out}");
}

#[test]
fn oracle_line_on_corpus_instance() {
    let dir = std::env::temp_dir().join(format!("mtfib-corpus-{}", std::process::id()));
    let out = stdout(&[
        "corpus",
        "--seed",
        "7",
        "--count",
        "3",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.matches("hierarchy=oracle=").count(), 3, "{out}");
    let file = dir.join("corpus_7_1.aut.txt");
    let text = std::fs::read_to_string(&file).unwrap();
    let phi = text
        .lines()
        .next()
        .unwrap()
        .trim_start_matches("# phi ")
        .to_string();
    let out = stdout(&["fiber", file.to_str().unwrap(), "--phi", &phi, "--oracle"]);
    assert!(out.contains("hierarchy=oracle="), "{out}");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn sigma_verdicts() {
    let out = stdout(&[
        "sigma",
        &data("khramtsov.gbs.txt"),
        "--phi",
        "a=1,b=2,t=0",
        "--phi",
        "a=0,b=0,t=1",
    ]);
    assert!(out.contains("a=1,b=2,t=0: in Σ(G)"), "{out}");
    assert!(out.contains("a=0,b=0,t=1: not in Σ(G)"), "{out}");
    let out = stdout(&[
        "sigma",
        &data("z2_amalgam.gog.txt"),
        "--phi",
        "p_1=2,p_2=0,q_1=1,q_2=1",
    ]);
    assert!(out.contains(": in Σ(G)"), "{out}");
}

#[test]
fn alexander_span() {
    let out = stdout(&["alexander", &data("f2xz.aut.txt"), "--phi", "x1=0,x2=0,t=1"]);
    assert!(out.contains("s^2 - 2*s + 1"), "{out}");
    assert!(out.contains("degree 2"), "{out}");
}

fn golden_commands() -> Vec<Vec<String>> {
    let mut cmds = Vec::new();
    for f in [
        "f2xz.aut.txt",
        "f3xz.aut.txt",
        "swap.aut.txt",
        "transvection.aut.txt",
        "quadratic.aut.txt",
        "reversed.aut.txt",
        "khramtsov.aut.txt",
        "circle2.map.txt",
        "circle3.map.txt",
        "circle4.map.txt",
    ] {
        cmds.push(vec!["analyze".into(), data(f)]);
        cmds.push(vec!["sigma".into(), data(f)]);
    }
    for f in [
        "khramtsov.gbs.txt",
        "f2xz.gbs.txt",
        "trefoil.gbs.txt",
        "bs12.gbs.txt",
        "bs23.gbs.txt",
    ] {
        cmds.push(vec!["gbs".into(), data(f)]);
    }
    cmds.push(vec![
        "gbs".into(),
        data("khramtsov.gbs.txt"),
        "--enumerate".into(),
        "2".into(),
    ]);
    cmds.push(vec!["sigma".into(), data("z2_amalgam.gog.txt")]);
    cmds.push(vec!["sigma".into(), data("bs12.gog.txt")]);
    for (f, phi) in [
        ("f3xz.aut.txt", "x1=1,x2=1,x3=1,t=2"),
        ("swap.aut.txt", "x1=0,x2=0,t=1"),
        ("transvection.aut.txt", "x1=0,x2=1,t=0"),
        ("khramtsov.aut.txt", "x1=0,x2=0,x3=1,x4=1,t=1"),
    ] {
        cmds.push(vec![
            "fiber".into(),
            data(f),
            "--phi".into(),
            phi.into(),
            "--oracle".into(),
        ]);
    }
    cmds.push(vec!["growth".into(), data("quadratic.aut.txt")]);
    cmds.push(vec![
        "corpus".into(),
        "--seed".into(),
        "3".into(),
        "--count".into(),
        "2".into(),
    ]);
    cmds
}

#[test]
fn json_round_trip() {
    for args in golden_commands() {
        let mut full = vec!["--format".to_string(), "json".to_string()];
        full.extend(args.iter().cloned());
        let refs: Vec<&str> = full.iter().map(String::as_str).collect();
        let json = stdout(&refs);
        let parsed: Report =
            serde_json::from_str(&json).unwrap_or_else(|e| panic!("{args:?}: {e}\n{json}"));
        let mut argv = vec!["mtfib".to_string()];
        argv.extend(full);
        let cli = Cli::parse_from(argv);
        let direct = execute(&cli.command).unwrap();
        assert_eq!(parsed, direct, "{args:?}");
        let again = serde_json::to_string_pretty(&parsed).unwrap();
        assert_eq!(again.trim_end(), json.trim_end(), "{args:?}");
    }
}
