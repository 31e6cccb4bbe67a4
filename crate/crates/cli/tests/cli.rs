use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn tracecone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tracecone"))
        .args(args)
        .env("NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn written_corpus() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let out = tracecone(&["corpus", "--write", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    dir
}

fn file(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn gen_matches_golden_file() {
    let golden = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/s-object-seed42-n3.sj");
    let expected = std::fs::read_to_string(golden).unwrap();
    let out = tracecone(&["gen", "--kind", "s-object", "--seed", "42", "--blocks", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), expected);
}

#[test]
fn roundtrip_exit_codes() {
    let dir = written_corpus();
    let ok = tracecone(&["roundtrip", &file(dir.path(), "coord-3.ej"), "--assert-identity"]);
    assert_eq!(code(&ok), 0);
    assert!(stdout(&ok).starts_with("roundtrip FG: identity"));

    let razak = tracecone(&["roundtrip", &file(dir.path(), "razak.ej"), "--assert-identity"]);
    assert_eq!(code(&razak), 1);
    assert!(stdout(&razak).contains("lost component: phantom cone"));

    // without the assertion a mismatch is just a report
    let plain = tracecone(&["roundtrip", &file(dir.path(), "razak.ej")]);
    assert_eq!(code(&plain), 0);
}

#[test]
fn validate_names_the_failed_condition() {
    let dir = written_corpus();
    let out = tracecone(&["validate", &file(dir.path(), "mutant-cond3.sj")]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("[condition-3]"));
    assert!(!text.contains("[condition-4]"));

    let ok = tracecone(&["validate", &file(dir.path(), "coord-2.ej")]);
    assert_eq!(code(&ok), 0);
    assert_eq!(stdout(&ok), "ok\n");
}

#[test]
fn morphisms_need_context() {
    let dir = written_corpus();
    let m = file(dir.path(), "swap-2.smj");
    assert_eq!(code(&tracecone(&["validate", &m])), 2);
    let src = file(dir.path(), "coord-2-stevens.sj");
    let out = tracecone(&["validate", &m, "--src", &src, "--dst", &src]);
    assert_eq!(code(&out), 0);
    let bad = tracecone(&[
        "validate",
        &file(dir.path(), "mutant-scale.smj"),
        "--src",
        &file(dir.path(), "unit-1.sj"),
        "--dst",
        &file(dir.path(), "unit-1.sj"),
    ]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).contains("[scale]"));
}

#[test]
fn usage_and_input_errors_exit_2() {
    assert_eq!(code(&tracecone(&["frobnicate"])), 2);
    assert_eq!(code(&tracecone(&["validate", "/nonexistent/file.sj"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.sj");
    std::fs::write(&broken, "{\"kind\": \"s-object\",\n  \"version\": ").unwrap();
    let out = tracecone(&["validate", broken.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    let out = tracecone(&["gen", "--kind", "s-object", "--seed", "1", "--blocks", "9"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn apply_transport_and_compose() {
    let dir = written_corpus();
    let p = |n: &str| file(dir.path(), n);
    let out = tracecone(&["apply", "--functor", "f", &p("coord-2-stevens.sj")]);
    assert_eq!(code(&out), 0);
    let coord2 = std::fs::read_to_string(dir.path().join("coord-2.ej")).unwrap();
    assert_eq!(stdout(&out), coord2);
    assert_eq!(code(&tracecone(&["apply", "--functor", "g", &p("coord-2-stevens.sj")])), 2);

    let out = tracecone(&[
        "transport",
        "--direction",
        "s2e",
        &p("swap-2.smj"),
        "--src",
        &p("coord-2-stevens.sj"),
        "--dst",
        &p("coord-2-stevens.sj"),
    ]);
    assert_eq!(code(&out), 0);
    let expected = std::fs::read_to_string(dir.path().join("swap-2-elliott.emj")).unwrap();
    assert_eq!(stdout(&out), expected);

    // swapping twice is the identity
    let out = tracecone(&["compose", &p("swap-2.smj"), &p("swap-2.smj")]);
    assert_eq!(code(&out), 0);
    let twice = dir.path().join("twice.smj");
    std::fs::write(&twice, stdout(&out)).unwrap();
    let out = tracecone(&[
        "compare",
        &p("coord-2-stevens.sj"),
        &p("coord-2-stevens.sj"),
        "--witness",
        twice.to_str().unwrap(),
        twice.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn transport_refuses_phantom_rays() {
    let dir = tempfile::tempdir().unwrap();
    let ctx = dir.path().join("ctx");
    let out = tracecone(&[
        "gen", "--kind", "e-morphism", "--seed", "5", "--blocks", "2", "--phantom", "1", "--context",
        ctx.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let m = dir.path().join("m.emj");
    std::fs::write(&m, stdout(&out)).unwrap();
    let src = file(&ctx, "src.ej");
    assert_eq!(code(&tracecone(&["validate", m.to_str().unwrap(), "--src", &src, "--dst", &src])), 0);
    let out = tracecone(&["transport", "--direction", "e2s", m.to_str().unwrap(), "--src", &src, "--dst", &src]);
    assert_eq!(code(&out), 1);
}

#[test]
fn compare_exact_and_search() {
    let dir = written_corpus();
    let p = |n: &str| file(dir.path(), n);
    assert_eq!(code(&tracecone(&["compare", &p("coord-2.ej"), &p("coord-2.ej")])), 0);
    let out = tracecone(&["compare", &p("coord-2.ej"), &p("coord-3.ej")]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).starts_with("different"));
    assert_eq!(code(&tracecone(&["compare", &p("coord-2.ej"), &p("coord-3.ej"), "--search"])), 1);
    let out = tracecone(&["compare", &p("af-two-ideal.sj"), &p("af-two-ideal.sj"), "--search", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(dir.path().join("forward.smj").exists());
}

#[test]
fn corpus_run_all_passes() {
    let out = tracecone(&["corpus", "--run-all"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.lines().all(|l| l.starts_with("pass ")), "{text}");
    assert!(text.contains("pass razak"));
}
