use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_alignment-drift"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn binary")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn synth(dir: &Path) {
    ok(&[
        "synth",
        "--out",
        p(dir),
        "--seed",
        "3",
        "--concepts",
        "200",
        "--edits",
        "50",
    ]);
}

fn report_row(csv: &Path, name: &str) -> String {
    std::fs::read_to_string(csv)
        .unwrap()
        .lines()
        .find(|l| l.starts_with(&format!("{name},")))
        .unwrap_or_else(|| panic!("no {name} row in {}", csv.display()))
        .to_string()
}

#[test]
fn stage_commands_reproduce_pipeline_report() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("data");
    synth(&data);
    for t in 0..3 {
        for f in ["o1.nt", "o2.nt", "alignment.tsv"] {
            assert!(data.join(format!("epoch{t}")).join(f).is_file());
        }
    }
    assert!(data.join("editlog.csv").is_file());

    let run_dir = tmp.path().join("run");
    ok(&[
        "pipeline",
        "--data-dir",
        p(&data),
        "--seed",
        "5",
        "--dims",
        "16",
        "--walks-per-entity",
        "4",
        "--classifier",
        "knn",
        "--classifier",
        "cart",
        "--out",
        p(&run_dir),
    ]);
    for f in [
        "walks.txt",
        "embedding.txt",
        "labels_train.csv",
        "labels_test.csv",
        "report.csv",
        "report.txt",
        "manifest.json",
    ] {
        assert!(run_dir.join(f).is_file(), "missing {f}");
    }

    let s = tmp.path();
    let e = |t: usize| data.join(format!("epoch{t}"));
    ok(&[
        "label",
        "--old",
        p(&e(0)),
        "--new",
        p(&e(1)),
        "--out",
        p(&s.join("l01.csv")),
    ]);
    ok(&[
        "label",
        "--old",
        p(&e(1)),
        "--new",
        p(&e(2)),
        "--out",
        p(&s.join("l12.csv")),
    ]);
    assert_eq!(
        std::fs::read(s.join("l01.csv")).unwrap(),
        std::fs::read(run_dir.join("labels_train.csv")).unwrap()
    );
    ok(&[
        "walks",
        "--data-dir",
        p(&data),
        "--walks-per-entity",
        "4",
        "--seed",
        "5",
        "--out",
        p(&s.join("walks.txt")),
    ]);
    assert_eq!(
        std::fs::read(s.join("walks.txt")).unwrap(),
        std::fs::read(run_dir.join("walks.txt")).unwrap()
    );
    ok(&[
        "embed",
        "--walks",
        p(&s.join("walks.txt")),
        "--dims",
        "16",
        "--seed",
        "5",
        "--out",
        p(&s.join("emb.txt")),
    ]);
    ok(&[
        "featurize",
        "--labels",
        p(&s.join("l01.csv")),
        "--embedding",
        p(&s.join("emb.txt")),
        "--out",
        p(&s.join("train.csv")),
    ]);
    ok(&[
        "featurize",
        "--labels",
        p(&s.join("l12.csv")),
        "--embedding",
        p(&s.join("emb.txt")),
        "--out",
        p(&s.join("test.csv")),
    ]);
    ok(&[
        "train",
        "--data",
        p(&s.join("train.csv")),
        "--classifier",
        "knn",
        "--seed",
        "5",
        "--out",
        p(&s.join("knn.json")),
    ]);
    let table = ok(&[
        "evaluate",
        "--model",
        p(&s.join("knn.json")),
        "--data",
        p(&s.join("test.csv")),
        "--out",
        p(&s.join("rep.csv")),
    ]);
    assert!(table.contains("KNN"));
    assert_eq!(
        report_row(&s.join("rep.csv"), "KNN"),
        report_row(&run_dir.join("report.csv"), "KNN")
    );
}

#[test]
fn diff_writes_one_row_per_changed_resource() {
    let tmp = tempfile::tempdir().unwrap();
    let old = tmp.path().join("old.nt");
    let new = tmp.path().join("new.nt");
    std::fs::write(&old, "<http://x/a> <http://x/p> <http://x/b> .\n").unwrap();
    std::fs::write(&new, "<http://x/a> <http://x/p> <http://x/c> .\n").unwrap();
    let out = ok(&["diff", "--old", p(&old), "--new", p(&new)]);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 3, "{out}");
    assert!(out.contains("http://x/a"));
    assert!(
        ok(&["diff", "--old", p(&old), "--new", p(&old)])
            .lines()
            .count()
            <= 1
    );
}

#[test]
fn exit_codes_by_error_class() {
    let tmp = tempfile::tempdir().unwrap();
    let missing = tmp.path().join("nope");

    let out = run(&[
        "pipeline",
        "--data-dir",
        p(&missing),
        "--out",
        p(&tmp.path().join("o")),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("[load]"));

    let out = run(&[
        "pipeline",
        "--data-dir",
        p(&missing),
        "--classifier",
        "bogus",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["pipeline", "--data-dir", p(&missing), "--dims", "0"]);
    assert_eq!(out.status.code(), Some(2));

    let bad = tmp.path().join("bad.nt");
    std::fs::write(&bad, "<http://x/a> <http://x/p> .\n").unwrap();
    let out = run(&["diff", "--old", p(&bad), "--new", p(&bad)]);
    assert_eq!(out.status.code(), Some(3));

    let out = run(&[
        "synth",
        "--out",
        p(&tmp.path().join("s")),
        "--concepts",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // Usage errors come from the argument parser.
    assert_eq!(run(&["walks"]).status.code(), Some(2));
}

#[test]
fn config_file_with_flag_overrides() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("data");
    synth(&data);
    let cfg = tmp.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# relative paths resolve against this file\n\
         data_dir = data\nout = out\ndims = 8\nwalks_per_entity = 2\nclassifier = nb\nseed = 1\n",
    )
    .unwrap();
    ok(&["pipeline", "--config", p(&cfg), "--classifier", "lr"]);
    let report = std::fs::read_to_string(tmp.path().join("out/report.csv")).unwrap();
    assert!(report.lines().any(|l| l.starts_with("LR,")));
    assert!(!report.lines().any(|l| l.starts_with("NB,")));
    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(tmp.path().join("out/manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["embedding"]["dimensions"], 8);
}
