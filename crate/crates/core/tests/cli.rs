use std::path::Path;
use std::process::{Command, Output};

fn driftbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_driftbench"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn generate_writes_a_reproducible_stream() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = driftbench(&["generate", "--scenario", "NSGT", "--seed", "42", "--out", path(out)]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,x1,x2,class,component");
    assert_eq!(lines.len(), 1 + 10001);
    assert!(lines[1].starts_with("0,"));
    assert!(lines[10001].starts_with("10000,"));

    let other = dir.path().join("c.csv");
    driftbench(&["generate", "--scenario", "NSGT", "--seed", "43", "--out", path(&other)]);
    assert_ne!(text, std::fs::read_to_string(&other).unwrap());
}

#[test]
fn generate_formats() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("five.csv");
    let o = driftbench(&["generate", "--scenario", "nsgt-5d", "--seed", "1", "--out", path(&csv)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let header = std::fs::read_to_string(&csv).unwrap().lines().next().unwrap().to_string();
    assert_eq!(header, "t,x1,x2,x3,x4,x5,class,component");

    let arff = dir.path().join("nscx.arff");
    let o = driftbench(&["generate", "--scenario", "NSCX", "--seed", "1", "--out", path(&arff)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&arff).unwrap();
    assert!(text.starts_with("@relation 'NSCX'"));
    assert!(text.contains("@attribute class {A,B}"));
    let data = text.split("@data\n").nth(1).unwrap();
    assert_eq!(data.lines().count(), 10001);
}

#[test]
fn generate_from_scenario_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/nsgr.toml");
    let (a, b) = (dir.path().join("file.csv"), dir.path().join("name.csv"));
    driftbench(&["generate", "--scenario", path(&file), "--seed", "3", "--out", path(&a)]);
    driftbench(&["generate", "--scenario", "NSGR", "--seed", "3", "--out", path(&b)]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn run_compare_report_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let results = dir.path().join("results");
    let o = driftbench(&[
        "run", "--scenario", "NSGT,NSPC-A", "--learner", "opt,nb,nn100", "--seeds", "3",
        "--outdir", path(&results),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let table = String::from_utf8(o.stdout).unwrap();
    assert!(table.contains("Opt.") && table.contains("NN100"));
    for f in ["finals.csv", "results.csv", "groups.csv", "curves/NSGT.csv"] {
        assert!(results.join(f).is_file(), "{f} missing");
    }
    let finals = std::fs::read_to_string(results.join("finals.csv")).unwrap();
    assert_eq!(finals.lines().count(), 1 + 2 * 3 * 3);
    let curve = std::fs::read_to_string(results.join("curves/NSGT.csv")).unwrap();
    assert_eq!(curve.lines().count(), 1 + 10001);

    let o = driftbench(&["compare", "--results", path(&results)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.starts_with("scenario,best,members"));
    assert_eq!(out.lines().count(), 3);
    assert!(results.join("pairwise.csv").is_file());

    let (r1, r2) = (dir.path().join("r1"), dir.path().join("r2"));
    for r in [&r1, &r2] {
        let o = driftbench(&["report", "--results", path(&results), "--out", path(r)]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    for f in ["results_table.txt", "results.csv", "curves/NSGT.csv", "curves/NSPC-A.csv"] {
        assert_eq!(std::fs::read(r1.join(f)).unwrap(), std::fs::read(r2.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn single_seed_run_skips_groups() {
    let dir = tempfile::tempdir().unwrap();
    let results = dir.path().join("one");
    let o = driftbench(&[
        "run", "--scenario", "NSLC", "--learner", "nb,sgd", "--seeds", "1", "--outdir",
        path(&results),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("significance groups not computed"));
    assert!(!results.join("groups.csv").exists());
    assert!(!String::from_utf8(o.stdout).unwrap().contains('*'));

    let o = driftbench(&["compare", "--results", path(&results)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("at least 2 seeds"));
}

#[test]
fn run_from_experiment_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.toml");
    std::fs::write(
        &config,
        r#"
scenarios = ["NSGT"]
learners = ["nb"]
seeds = 2

[[learner]]
id = "nn50"
label = "NN50"
kind = "window_knn"
wsize = 50
"#,
    )
    .unwrap();
    let results = dir.path().join("out");
    let o = driftbench(&["run", "--config", path(&config), "--outdir", path(&results)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let finals = std::fs::read_to_string(results.join("finals.csv")).unwrap();
    assert!(finals.contains(",nn50,NN50,window_knn,2,"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");

    let o = driftbench(&["generate", "--scenario", "NOPE", "--seed", "1", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("NOPE"));

    assert_eq!(driftbench(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(driftbench(&["--help"]).status.code(), Some(0));
    assert_eq!(driftbench(&["run", "--outdir", path(dir.path())]).status.code(), Some(1));

    let o = driftbench(&[
        "run", "--scenario", "NSGT", "--learner", "nb", "--seeds", "2", "--alpha", "1.5",
        "--outdir", path(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(1));

    let empty = dir.path().join("empty");
    std::fs::create_dir(&empty).unwrap();
    let o = driftbench(&["report", "--results", path(&empty), "--out", path(&dir.path().join("r"))]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains(path(&empty)), "{}", stderr(&o));

    let blocked = dir.path().join("file-not-dir");
    std::fs::write(&blocked, "").unwrap();
    let o = driftbench(&[
        "generate", "--scenario", "NSGT", "--seed", "1", "--out",
        path(&blocked.join("x.csv")),
    ]);
    assert_eq!(o.status.code(), Some(3));
}
