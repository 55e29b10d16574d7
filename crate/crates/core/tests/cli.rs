use std::path::Path;
use std::process::{Command, Output};

fn flexiplex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flexiplex"))
        .args(args)
        .env_remove("FLEXIPLEX_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn every_bundle_passes() {
    for bundle in [
        "lemma-2.5",
        "lemma-3.2",
        "lemma-3.4",
        "theorem-4.7",
        "remark-5.8",
        "theorem-1.2",
        "theorem-1.3",
        "theorem-1.5",
        "theorem-1.6",
    ] {
        let o = flexiplex(&["lemma-check", bundle]);
        assert_eq!(o.status.code(), Some(0), "{bundle}: {}", stdout(&o));
    }
    let o = flexiplex(&["lemma-check", "theorem-4.7", "--n", "5", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"passed\": true"));
}

#[test]
fn sweep_csv_minors_constant_det_varies() {
    let o = flexiplex(&["sweep", "--family", "n4", "--a", "1,1,-2", "--b", "2,-3,1"]);
    assert_eq!(o.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(o.stdout.as_slice());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    let rows: Vec<Vec<String>> = reader
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    assert_eq!(rows.len(), 7);
    let column = |name: &str| -> Vec<&str> {
        let i = header.iter().position(|h| h == name).unwrap();
        rows.iter().map(|r| r[i].as_str()).collect()
    };
    let minors: Vec<&String> = header.iter().filter(|h| h.starts_with("minor_")).collect();
    assert_eq!(minors.len(), 6);
    for m in minors {
        let col = column(m);
        assert!(col.iter().all(|v| *v == col[0]), "{m} varies");
    }
    let det = column("det");
    assert!(det.iter().any(|v| *v != det[0]));
    assert_eq!(column("p"), vec!["3"; 7]);
    assert_eq!(
        header.iter().filter(|h| h.starts_with("face_vol_")).count(),
        10
    );
}

#[test]
fn degenerate_family_exits_2() {
    let o = flexiplex(&["family", "--kind", "n4", "--a", "1,1,-2", "--b", "1,-2,1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("a2*b3 = a3*b2"), "{err}");
}

#[test]
fn bad_input_exit_codes() {
    assert_eq!(flexiplex(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        flexiplex(&["family", "--kind", "n4", "--a", "1,x", "--b", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        flexiplex(&["family", "--n", "5", "--format", "csv"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        flexiplex(&["dual", "--kind", "n4", "--a", "1,1,-2", "--b", "2,-3,1"])
            .status
            .code(),
        Some(2)
    );
    let o = flexiplex(&[
        "family",
        "--n",
        "5",
        "--output",
        "/nonexistent-dir/out.json",
    ]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(flexiplex(&["--help"]).status.code(), Some(0));
}

fn run_to_file(dir: &Path, name: &str, args: &[&str]) -> Vec<u8> {
    let path = dir.join(name);
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_owned();
    full.extend(["--output", &p]);
    let o = flexiplex(&full);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    std::fs::read(path).unwrap()
}

#[test]
fn outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for (i, args) in [
        vec!["dual", "--n", "5", "--seed", "3"],
        vec!["sweep", "--n", "6", "--seed", "2", "--format", "json"],
        vec![
            "sweep",
            "--kind",
            "n5",
            "--a",
            "1,1,-2",
            "--b",
            "2,-3,1",
            "--grid",
            "1/2,1,5/3",
        ],
        vec!["family", "--n", "7"],
        vec!["lemma-check", "lemma-2.5", "--seed", "9"],
    ]
    .iter()
    .enumerate()
    {
        let first = run_to_file(dir.path(), &format!("a{i}"), args);
        let second = run_to_file(dir.path(), &format!("b{i}"), args);
        assert!(!first.is_empty());
        assert_eq!(first, second, "{args:?}");
    }
}

#[test]
fn env_seed_overrides_flag() {
    let with_env = Command::new(env!("CARGO_BIN_EXE_flexiplex"))
        .args(["family", "--n", "5", "--seed", "1"])
        .env("FLEXIPLEX_SEED", "4")
        .output()
        .unwrap();
    let direct = flexiplex(&["family", "--n", "5", "--seed", "4"]);
    let other = flexiplex(&["family", "--n", "5", "--seed", "1"]);
    assert_eq!(with_env.stdout, direct.stdout);
    assert_ne!(with_env.stdout, other.stdout);
}

#[test]
fn search_appends_and_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("log.jsonl");
    let log = log.to_str().unwrap();
    let summary = |o: &Output| -> serde_json::Value { serde_json::from_slice(&o.stdout).unwrap() };

    let first = flexiplex(&[
        "search",
        "--n",
        "5",
        "--samples",
        "150",
        "--seed",
        "11",
        "--log",
        log,
    ]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(summary(&first)["start"], 0);
    let second = flexiplex(&[
        "search",
        "--n",
        "5",
        "--samples",
        "150",
        "--seed",
        "11",
        "--log",
        log,
    ]);
    assert_eq!(summary(&second)["start"], 150);

    let split = std::fs::read_to_string(log).unwrap();
    let cursors = split.lines().filter(|l| l.contains("\"cursor\"")).count();
    assert_eq!(cursors, 2);

    // The hits from two resumed halves equal the hits of one full run.
    let whole = dir.path().join("whole.jsonl");
    let whole = whole.to_str().unwrap();
    let o = flexiplex(&[
        "search",
        "--n",
        "5",
        "--samples",
        "300",
        "--seed",
        "11",
        "--log",
        whole,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let hits = |s: &str| -> Vec<String> {
        s.lines()
            .filter(|l| l.contains("\"hit\""))
            .map(String::from)
            .collect()
    };
    assert!(!hits(&split).is_empty());
    assert_eq!(hits(&split), hits(&std::fs::read_to_string(whole).unwrap()));

    let counts = &summary(&o)["counts"];
    let total: u64 = counts
        .as_object()
        .unwrap()
        .values()
        .map(|v| v.as_u64().unwrap())
        .sum();
    assert_eq!(total, 300);
}
