//! The `bellopt` binary: output files, verification and exit statuses.

use std::path::Path;
use std::process::{Command, Output};

use bellopt::cli::{read_records, Model, ResultRecord};

fn bellopt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellopt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn records(path: &Path) -> Vec<ResultRecord> {
    read_records(std::fs::File::open(path).unwrap())
        .unwrap()
        .into_iter()
        .map(Result::unwrap)
        .collect()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn run_writes_a_verifiable_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.csv");
    let status = bellopt(&["run", "--n", "2", "--restarts", "2", "--seed", "42", "--out", path_str(&out)]);
    assert_eq!(status.status.code(), Some(0), "{}", String::from_utf8_lossy(&status.stderr));

    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("n,model,f_max,separability_bound,evaluations,lp_solves,wall_time_seconds,seed,settings\n"));
    let recs = records(&out);
    assert_eq!(recs.len(), 1);
    let r = &recs[0];
    assert_eq!((r.n, r.model, r.seed), (2, Model::Multiport, 42));
    assert!((r.f_max - (1.0 - 0.5f64.sqrt())).abs() < 1e-4);
    assert_eq!(r.separability_bound, 2.0 / 3.0);
    assert_eq!(r.settings.len(), 8);
    assert!(r.lp_solves > r.evaluations);

    let verify = bellopt(&["verify", path_str(&out)]);
    assert_eq!(verify.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&verify.stdout).contains("record 1: "));
}

#[test]
fn json_output_mirrors_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("a.csv");
    let json = dir.path().join("a.json");
    let common = ["run", "--n", "3", "--restarts", "1", "--seed", "3"];
    assert!(bellopt(&[&common[..], &["--out", path_str(&csv)]].concat()).status.success());
    assert!(bellopt(&[&common[..], &["--out", path_str(&json), "--format", "json"]].concat()).status.success());

    let (a, b) = (&records(&csv)[0], &records(&json)[0]);
    assert_eq!(a.f_max, b.f_max);
    assert_eq!(a.settings, b.settings);
    assert_eq!(a.evaluations, b.evaluations);
    let value: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let keys: Vec<&str> = value[0].as_object().unwrap().keys().map(String::as_str).collect();
    for key in ["n", "model", "f_max", "separability_bound", "evaluations", "lp_solves", "wall_time_seconds", "seed", "settings"] {
        assert!(keys.contains(&key), "missing {key}");
    }
    assert_eq!(bellopt(&["verify", path_str(&json)]).status.code(), Some(0));
}

#[test]
fn corrupted_threshold_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let run = bellopt(&["sweep", "--n-min", "2", "--n-max", "3", "--restarts", "1", "--out", path_str(&out)]);
    assert!(run.status.success());

    let mut recs = records(&out);
    assert_eq!(recs.len(), 2);
    recs[1].f_max += 1e-3;
    let mut buf = Vec::new();
    bellopt::cli::write_records(&mut buf, &recs, bellopt::cli::Format::Csv).unwrap();
    std::fs::write(&out, buf).unwrap();

    let verify = bellopt(&["verify", path_str(&out)]);
    assert_eq!(verify.status.code(), Some(2));
    let report = String::from_utf8_lossy(&verify.stdout);
    assert!(report.contains("record 1: ") && report.contains(": ok"));
    let bad_line = report.lines().find(|l| l.starts_with("record 2:")).unwrap();
    assert!(!bad_line.ends_with(": ok"), "{bad_line}");
    assert!(String::from_utf8_lossy(&verify.stderr).contains("records 2 failed"));
}

#[test]
fn unreadable_field_names_the_record() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    assert!(bellopt(&["run", "--n", "2", "--restarts", "1", "--out", path_str(&out)]).status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let mut fields: Vec<String> = lines[1].split(',').map(String::from).collect();
    fields[2] = "not-a-number".into();
    lines[1] = fields.join(",");
    std::fs::write(&out, lines.join("\n")).unwrap();

    let verify = bellopt(&["verify", path_str(&out)]);
    assert_eq!(verify.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&verify.stdout).contains("record 1: stored - recomputed -: unreadable"));
}

#[test]
fn degenerate_sweep_matches_run() {
    let dir = tempfile::tempdir().unwrap();
    let sweep = dir.path().join("s.csv");
    let run = dir.path().join("r.csv");
    assert!(bellopt(&["sweep", "--n-min", "3", "--n-max", "3", "--restarts", "2", "--out", path_str(&sweep)]).status.success());
    assert!(bellopt(&["run", "--n", "3", "--restarts", "2", "--out", path_str(&run)]).status.success());
    let (s, r) = (records(&sweep), records(&run));
    assert_eq!(s.len(), 1);
    assert_eq!(s[0].n, 3);
    assert_eq!(s[0].seed, bellopt::cli::sweep_seed(0, 3));
    assert!((s[0].f_max - r[0].f_max).abs() < 1e-4);
}

#[test]
fn sg3_records_stern_gerlach_model() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sg.json");
    let run = bellopt(&["sg3", "--restarts", "1", "--format", "json", "--out", path_str(&out)]);
    assert!(run.status.success());
    let r = &records(&out)[0];
    assert_eq!((r.n, r.model), (3, Model::SternGerlach));
    assert_eq!(r.settings.len(), 8);
    assert!(std::fs::read_to_string(&out).unwrap().contains("\"stern-gerlach\""));
    assert_eq!(bellopt(&["verify", path_str(&out)]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "").unwrap();
    let header_only = dir.path().join("header.csv");
    std::fs::write(&header_only, "n,model,f_max,separability_bound,evaluations,lp_solves,wall_time_seconds,seed,settings\n").unwrap();
    let missing = dir.path().join("missing.csv");

    let cases: Vec<Vec<&str>> = vec![
        vec!["run", "--n", "1"],
        vec!["run", "--n", "13"],
        vec!["run", "--n", "3", "--model", "tritter"],
        vec!["run", "--n", "3", "--restarts", "0"],
        vec!["run"],
        vec!["sweep", "--n-min", "5", "--n-max", "4"],
        vec!["verify", path_str(&empty)],
        vec!["verify", path_str(&header_only)],
        vec!["verify", path_str(&missing)],
        vec!["frobnicate"],
    ];
    for args in cases {
        assert_eq!(bellopt(&args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn help_succeeds() {
    let out = bellopt(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for cmd in ["run", "sweep", "verify", "sg3"] {
        assert!(text.contains(cmd));
    }
}
