use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rasternest::io::instance::parse_instance;
use rasternest::io::pbm::parse_pbm;
use rasternest::io::result::ResultFile;
use rasternest::problem::Problem;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rasternest"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn solve_to(dir: &Path, instance: &str, extra: &[&str]) -> (Output, PathBuf) {
    let out_path = dir.join("result.json");
    let inst = fixture(instance);
    let mut args = vec![
        "solve",
        "--instance",
        inst.to_str().unwrap(),
        "--width-px",
        "48",
        "--out",
        out_path.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    (run(&args), out_path)
}

#[test]
fn solve_writes_a_feasible_result() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("layout.svg");
    let (out, path) = solve_to(
        dir.path(),
        "mixed.json",
        &["--time-limit", "30", "--max-cdh", "200", "--svg", svg.to_str().unwrap()],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let result = ResultFile::read(&path).unwrap();
    let problem = Problem::new(&parse_instance(&fixture("mixed.json")).unwrap(), 48).unwrap();
    result.verify(&problem).unwrap();
    assert!(result.density > 0.0);
    assert_eq!(result.placements.len(), 14);
    let svg = std::fs::read_to_string(svg).unwrap();
    assert_eq!(svg.matches("<g class=\"piece\"").count(), 14);
}

#[test]
fn zero_time_limit_gives_the_construction() {
    let dir = tempfile::tempdir().unwrap();
    let (out, path) = solve_to(dir.path(), "jigsaw.json", &["--time-limit", "0"]);
    assert_eq!(code(&out), 0);
    let result = ResultFile::read(&path).unwrap();
    assert_eq!(result.stats.cdh_calls, 0);
    assert_eq!(result.stats.events.len(), 1);
}

#[test]
fn identical_flags_identical_bodies() {
    let read_body = |p: &Path| {
        let mut v: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("metadata");
        serde_json::to_string_pretty(&v).unwrap()
    };
    let bodies: Vec<String> = (0..2)
        .map(|_| {
            let dir = tempfile::tempdir().unwrap();
            let (out, path) = solve_to(
                dir.path(),
                "profile.json",
                &["--seed", "11", "--time-limit", "60", "--max-cdh", "150"],
            );
            assert_eq!(code(&out), 0);
            read_body(&path)
        })
        .collect();
    assert_eq!(bodies[0], bodies[1]);
}

#[test]
fn several_runs_are_summarized() {
    let dir = tempfile::tempdir().unwrap();
    let (out, path) = solve_to(
        dir.path(),
        "jigsaw.json",
        &["--runs", "3", "--time-limit", "20", "--max-cdh", "40"],
    );
    assert_eq!(code(&out), 0);
    let result = ResultFile::read(&path).unwrap();
    let seeds: Vec<u64> = result.stats.runs.iter().map(|r| r.seed).collect();
    assert_eq!(seeds, vec![1, 2, 3]);
    let best = result.stats.runs.iter().map(|r| r.best_length).min().unwrap();
    assert_eq!(result.best_length, best);
}

#[test]
fn invalid_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let text = std::fs::read_to_string(fixture("one_square.json"))
        .unwrap()
        .replace("[\n        0\n      ]", "[90]");
    std::fs::write(&bad, text).unwrap();
    let out = run(&["solve", "--instance", bad.to_str().unwrap(), "--time-limit", "0"]);
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("include 0"));

    let missing = run(&["solve", "--instance", "/nonexistent/instance.json"]);
    assert_eq!(code(&missing), 2);
    let flag = run(&["solve", "--instance", "x.json", "--corner-reduction", "maybe"]);
    assert_eq!(code(&flag), 2);
    let rdec = run(&[
        "solve",
        "--instance",
        fixture("one_square.json").to_str().unwrap(),
        "--rdec",
        "1.5",
    ]);
    assert_eq!(code(&rdec), 2);
}

#[test]
fn too_wide_piece_exits_3() {
    let out = run(&[
        "solve",
        "--instance",
        fixture("too_wide.json").to_str().unwrap(),
        "--width-px",
        "8",
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn oracle_passes_and_catches_a_fault() {
    let ok = run(&["oracle", "--pairs", "200", "--seed", "3"]);
    assert_eq!(code(&ok), 0);
    let report: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(report["nfp_pairs"], 200);
    assert_eq!(report["nfp_mismatches"], 0);
    let bad = run(&["oracle", "--pairs", "10", "--inject-fault"]);
    assert_eq!(code(&bad), 1);
}

#[test]
fn nfp_dump_of_two_unit_squares() {
    let dir = tempfile::tempdir().unwrap();
    let pbm = dir.path().join("nfp.pbm");
    let out = run(&[
        "nfp",
        "--instance",
        fixture("one_square.json").to_str().unwrap(),
        "--width-px",
        "1",
        "--a",
        "sq",
        "--b",
        "sq:0",
        "--out",
        pbm.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let (bbox, cells) = parse_pbm(&std::fs::read(pbm).unwrap()).unwrap();
    assert_eq!((bbox.width(), bbox.height()), (1, 1));
    assert_eq!(cells, vec![rasternest::geometry::Point::new(0, 0)]);
}

#[test]
fn render_one_square_and_reject_empty() {
    let dir = tempfile::tempdir().unwrap();
    let (out, path) = solve_to(dir.path(), "one_square.json", &["--time-limit", "0"]);
    assert_eq!(code(&out), 0);
    let svg = dir.path().join("one.svg");
    let inst = fixture("one_square.json");
    let args = |result: &Path| {
        vec![
            "render".to_string(),
            "--instance".into(),
            inst.to_str().unwrap().into(),
            "--result".into(),
            result.to_str().unwrap().into(),
            "--svg".into(),
            svg.to_str().unwrap().into(),
        ]
    };
    let r = Command::new(env!("CARGO_BIN_EXE_rasternest"))
        .args(args(&path))
        .output()
        .unwrap();
    assert_eq!(code(&r), 0);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<rect ").count(), 2);
    std::fs::remove_file(&svg).unwrap();

    let mut empty = ResultFile::read(&path).unwrap();
    empty.placements.clear();
    let empty_path = dir.path().join("empty.json");
    empty.write(&empty_path).unwrap();
    let r = Command::new(env!("CARGO_BIN_EXE_rasternest"))
        .args(args(&empty_path))
        .output()
        .unwrap();
    assert_ne!(code(&r), 0);
    assert!(!svg.exists());
}

#[test]
fn bench_table() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bench.csv");
    let out = run(&[
        "bench",
        "--dir",
        fixture("bench").to_str().unwrap(),
        "--runs",
        "2",
        "--width-px",
        "24",
        "--time-limit",
        "10",
        "--max-cdh",
        "30",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        let density: f64 = cols[5].parse().unwrap();
        assert!(density > 0.0 && density <= 100.0);
        cols[6].parse::<u64>().unwrap();
    }

    let empty = tempfile::tempdir().unwrap();
    let out = run(&["bench", "--dir", empty.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 1);

    let paired = run(&[
        "bench",
        "--dir",
        fixture("bench").to_str().unwrap(),
        "--width-px",
        "24",
        "--max-cdh",
        "20",
        "--corner-reduction",
        "both",
    ]);
    assert_eq!(code(&paired), 0);
    let text = String::from_utf8_lossy(&paired.stdout);
    assert!(text.lines().next().unwrap().ends_with("cdh_ratio"));
    assert_eq!(text.lines().count(), 3);
}
