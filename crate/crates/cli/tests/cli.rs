use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_khmovie")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("khmovie-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn homology_of_the_unknot() {
    let p = scratch("unknot.diagram", "crossings 0\nloop 1\n");
    let o = run(&["kh", s(&p)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(0,-1) 1\n(0,1) 1\n");
}

#[test]
fn trefoil_homology_at_one_grading() {
    let o = run(&["kh", s(&corpus("trefoil.braid")), "--grading", "3,9"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(3,9) 1\n");
}

#[test]
fn euler_matches_the_bracket() {
    let o = run(&["kh", s(&corpus("m9_46.diagram")), "--euler"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("MATCH\n"), "{}", stdout(&o));
}

#[test]
fn budget_and_parse_errors_have_their_codes() {
    let o = run(&["kh", s(&corpus("m9_46.diagram")), "--budget", "4"]);
    assert_eq!(o.status.code(), Some(khmovie_cli::EXIT_BUDGET));
    let p = scratch("bad.diagram", "crossings 1\n+ 1 2 3\n");
    let o = run(&["kh", s(&p)]);
    assert_eq!(o.status.code(), Some(khmovie_cli::EXIT_PARSE));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn apply_with_trace() {
    let o = run(&[
        "apply",
        s(&corpus("m9_46.a.movie")),
        s(&corpus("m9_46.phi.chain")),
        "--trace",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("step 1 saddle"));
    assert!(lines.iter().all(|l| l.starts_with("step ") || *l == lines[lines.len() - 1]));
    let last = lines[lines.len() - 1];
    assert!(last == "+1 * [ | ]" || last == "-1 * [ | ]", "{last}");
}

#[test]
fn band_evaluation_and_compatibility() {
    let bands = corpus("10_148.sigma.bands");
    let o = run(&["band", s(&bands), "--eval", "psi"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout(&o);
    assert!(v.trim() == "+1 * [ | ]" || v.trim() == "-1 * [ | ]", "{v}");
    let o = run(&["band", s(&bands), "--compat", s(&corpus("10_148.phi.chain"))]);
    assert_eq!(stdout(&o), "compatible\n");
    let o = run(&[
        "band",
        s(&corpus("10_148.sigma_prime.bands")),
        "--rewrite",
        s(&corpus("10_148.rewrite")),
        "--eval",
        s(&corpus("10_148.phi.chain")),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0\n");
    let o = run(&["band", s(&bands)]);
    assert!(stdout(&o).starts_with("start"));
}

#[test]
fn identical_movies_are_not_distinguished() {
    let m = s(&corpus("m9_46.a.movie")).to_string();
    let o = run(&["distinguish", s(&corpus("m9_46.diagram")), &m, &m, "--budget", "50"]);
    assert_eq!(o.status.code(), Some(khmovie_cli::EXIT_BUDGET));
    let o = run(&["distinguish", s(&corpus("trefoil.braid")), &m, &m]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn distinguish_finds_a_certificate() {
    let o = run(&[
        "distinguish",
        s(&corpus("m9_46.diagram")),
        s(&corpus("m9_46.a.movie")),
        s(&corpus("m9_46.b.movie")),
        "--chain",
        s(&corpus("m9_46.phi.chain")),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("representative"), "{text}");
}

#[test]
fn corpus_verifies() {
    let dir = corpus("");
    let o = run(&["corpus", "verify", "--dir", s(&dir), "--jobs", "2"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.ends_with(" checks, 0 mismatched\n"));
    let o = run(&["corpus", "list", "--dir", s(&dir)]);
    assert!(stdout(&o).contains("m9_46: 9 crossings, movies [a b], chains [phi]"));
}
