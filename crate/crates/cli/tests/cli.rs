use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use currents_lab::run::{verify, Manifest, Status};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_currents-lab"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn run(config: &Path, out: &Path, workers: usize) -> Output {
    bin()
        .args(["run", "--config"])
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(["--workers", &workers.to_string(), "--seed", "0"])
        .output()
        .unwrap()
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("config.json");
    std::fs::write(&p, text).unwrap();
    p
}

fn manifest(dir: &Path) -> Manifest {
    serde_json::from_slice(&std::fs::read(dir.join("manifest.json")).unwrap()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const FIB: &str = r#""fib": {"images": ["ab", "a"], "inverse_images": ["b", "Ba"], "boundary": ["abAB"]}"#;

#[test]
fn empty_experiment_list() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"rank": 2, "experiments": []}"#);
    let out = dir.path().join("out");
    let o = run(&cfg, &out, 1);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(manifest(&out).entries.is_empty());
}

#[test]
fn undefined_automorphism_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"rank": 2, "seeds": {"s": {"terms": [{"word": "a", "coeff": "1"}]}},
            "experiments": [{"name": "x", "kind": "orbit", "automorphism": "nope", "seed": "s", "n": 3, "L": 2}]}"#,
    );
    let o = run(&cfg, &dir.path().join("out"), 1);
    assert_eq!(o.status.code(), Some(2));
    let msg = stderr(&o);
    assert!(msg.contains("experiments[0].automorphism") && msg.contains("\"nope\""), "{msg}");
    assert!(!dir.path().join("out").exists());
}

#[test]
fn syntax_errors_report_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "{\n  \"rank\": 2,\n  \"experiments\": [,]\n}");
    let o = bin().args(["validate", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("config.json:3:"), "{}", stderr(&o));
}

#[test]
fn unknown_fields_and_bad_inverses_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"rank": 2, "automorphisms": {"bad": {"images": ["ab", "a"], "inverse_images": ["b", "a"]}},
            "experiments": [{"name": "x", "kind": "boundary", "automorphism": "bad", "nn": 3}]}"#,
    );
    let o = bin().args(["validate", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("nn"), "{}", stderr(&o));

    let cfg = write_config(
        dir.path(),
        r#"{"rank": 2, "automorphisms": {"bad": {"images": ["ab", "a"], "inverse_images": ["b", "a"], "boundary": ["abAB"]}},
            "experiments": [{"name": "x", "kind": "boundary", "automorphism": "bad"},
                            {"name": "x", "kind": "periodic", "automorphism": "bad"}]}"#,
    );
    let o = bin().args(["validate", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let msg = stderr(&o);
    assert!(msg.contains("automorphisms.bad"), "{msg}");
    assert!(msg.contains("experiments[1].name"), "{msg}");
    assert!(msg.contains("experiments[1].Lmax") && msg.contains("experiments[1].p"), "{msg}");
}

#[test]
fn budget_failures_are_isolated() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &format!(
            r#"{{"rank": 2, "automorphisms": {{{FIB}}},
                "experiments": [
                  {{"name": "tight", "kind": "periodic", "automorphism": "fib", "Lmax": 4, "p": 6, "budget": 5}},
                  {{"name": "fine", "kind": "boundary", "automorphism": "fib"}}]}}"#
        ),
    );
    let out = dir.path().join("out");
    let o = run(&cfg, &out, 2);
    assert_eq!(o.status.code(), Some(currents_lab::EXIT_EXPERIMENT_FAILED));
    let m = manifest(&out);
    assert_eq!(m.entries[0].status, Status::Error);
    assert!(m.entries[0].error.as_deref().unwrap().contains("budget"));
    assert!(m.entries[0].files.is_empty());
    assert_eq!(m.entries[1].status, Status::Ok);
    assert!(out.join("fine.json").exists());
    assert!(verify(&out).unwrap().is_empty());
}

#[test]
fn fibonacci_config_matches_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = run(&configs().join("fibonacci.json"), &out, 3);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/fibonacci");
    let mut names: Vec<_> = std::fs::read_dir(&golden).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    let mut produced: Vec<_> = std::fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name()).collect();
    produced.sort();
    assert_eq!(names, produced);
    for n in names {
        assert_eq!(std::fs::read(golden.join(&n)).unwrap(), std::fs::read(out.join(&n)).unwrap(), "{n:?}");
    }
    assert!(verify(&out).unwrap().is_empty());
}

#[test]
fn manifest_detects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    assert_eq!(run(&configs().join("fibonacci.json"), &out, 1).status.code(), Some(0));
    std::fs::write(out.join("fib-boundary.json"), "{}\n").unwrap();
    assert_eq!(verify(&out).unwrap(), vec!["fib-boundary.json".to_string()]);
}

#[test]
fn all_bundled_configs_run_and_validate() {
    for name in ["fibonacci", "acceptance", "genus_two"] {
        let cfg = configs().join(format!("{name}.json"));
        let o = bin().args(["validate", "--config"]).arg(&cfg).output().unwrap();
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stderr(&o));
        let dir = tempfile::tempdir().unwrap();
        let o = run(&cfg, dir.path(), 2);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stderr(&o));
        assert!(manifest(dir.path()).entries.iter().all(|e| e.status == Status::Ok));
    }
}

#[test]
fn show_pretty_prints() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/fibonacci/fib-boundary.json");
    let o = bin().arg("show").arg(&golden).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(o.stdout, std::fs::read(&golden).unwrap());
    let o = bin().args(["show", "/nonexistent/report.json"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn seed_changes_only_random_experiments() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"rank": 3, "experiments": [
              {"name": "r", "kind": "primitive", "words": ["ab"], "random_count": 10, "random_length": 5},
              {"name": "w", "kind": "whitehead", "words": ["abc"]}]}"#,
    );
    let outs: Vec<PathBuf> = [0u64, 0, 7]
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let out = dir.path().join(format!("o{i}"));
            let o = bin()
                .args(["run", "--config"])
                .arg(&cfg)
                .arg("--out")
                .arg(&out)
                .args(["--seed", &s.to_string()])
                .output()
                .unwrap();
            assert_eq!(o.status.code(), Some(0));
            out
        })
        .collect();
    let read = |d: &PathBuf, f: &str| std::fs::read(d.join(f)).unwrap();
    assert_eq!(read(&outs[0], "r.json"), read(&outs[1], "r.json"));
    assert_ne!(read(&outs[0], "r.json"), read(&outs[2], "r.json"));
    assert_eq!(read(&outs[0], "w.json"), read(&outs[2], "w.json"));
}
