use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use givp::solver::Solution;
use givp::stats::read_records_file;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn givp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_givp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = givp(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn err_line(out: &Output) -> String {
    assert!(!out.status.success());
    String::from_utf8(out.stderr.clone())
        .unwrap()
        .lines()
        .next()
        .unwrap_or_default()
        .to_string()
}

fn path(dir: &tempfile::TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

#[test]
fn gen_is_deterministic() {
    let d = tempfile::tempdir().unwrap();
    let (a, b) = (path(&d, "a.json"), path(&d, "b.json"));
    for p in [&a, &b] {
        ok(&[
            "gen",
            "--seed",
            "7",
            "--points",
            "50",
            "--edge-attempts",
            "70",
            "--out",
            p,
        ]);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let text = fs::read_to_string(&a).unwrap();
    assert!(text.contains("\"rng_id\":\"chacha8\""));
}

#[test]
fn gen_flags_are_checked() {
    let d = tempfile::tempdir().unwrap();
    let out = path(&d, "g.json");
    let missing = givp(&["gen", "--points", "5", "--out", &out]);
    let text = String::from_utf8_lossy(&missing.stderr);
    assert!(text.contains("--seed") && text.contains("Usage:"), "{text}");
    let one = givp(&["gen", "--seed", "1", "--points", "1", "--out", &out]);
    assert_eq!(err_line(&one), "error: n_points must be at least 3, got 1");
}

#[test]
fn solve_then_verify_passes() {
    let d = tempfile::tempdir().unwrap();
    let s = path(&d, "s.json");
    let g = fixture("triangle.json");
    let g = g.to_str().unwrap();
    let line = ok(&["solve", g, "--variant", "sequential", "--out", &s]);
    assert!(line.starts_with("variant sequential sites 12 "), "{line}");
    assert!(line.contains(" epsilon 0.616"));
    let report = path(&d, "r.json");
    let v = ok(&["verify", g, &s, "--mode", "all", "--report", &report]);
    assert_eq!(v, "certificate PASS\nbruteforce PASS\nsampled PASS\n");
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 3);
}

#[test]
fn solve_flags_are_checked() {
    let d = tempfile::tempdir().unwrap();
    let s = path(&d, "s.json");
    let g = fixture("triangle.json");
    let g = g.to_str().unwrap();
    let bogus = givp(&["solve", g, "--variant", "bogus", "--out", &s]);
    assert!(err_line(&bogus).contains("naive, sequential, recursive"));
    let unsafe_ = givp(&["solve", g, "--safety", "1.5", "--out", &s]);
    assert_eq!(
        err_line(&unsafe_),
        "error: safety must lie in (0, 1), got 1.5"
    );
    let missing = givp(&["solve", "/nonexistent/g.json", "--out", &s]);
    assert_eq!(missing.status.code(), Some(2));
    assert_eq!(String::from_utf8_lossy(&missing.stderr).lines().count(), 1);
}

#[test]
fn moved_site_fails_verification() {
    let d = tempfile::tempdir().unwrap();
    let s = path(&d, "s.json");
    let g = fixture("triangle.json");
    let g = g.to_str().unwrap();
    ok(&["solve", g, "--out", &s]);
    let mut sol = Solution::load(&s).unwrap();
    let eps = sol.report.epsilon;
    sol.sites[0].x += 10.0 * eps;
    sol.save(&s).unwrap();
    let out = givp(&["verify", g, &s, "--mode", "certificate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("certificate FAIL edge "));
}

#[test]
fn brute_force_is_capped() {
    let d = tempfile::tempdir().unwrap();
    let (g, s) = (path(&d, "g.json"), path(&d, "s.json"));
    ok(&[
        "gen",
        "--seed",
        "3",
        "--points",
        "20",
        "--edge-attempts",
        "15",
        "--out",
        &g,
    ]);
    ok(&["solve", &g, "--variant", "naive", "--out", &s]);
    assert!(Solution::load(&s).unwrap().sites.len() > 5000);
    let out = givp(&["verify", &g, &s, "--mode", "bruteforce"]);
    assert!(err_line(&out).contains("use --mode certificate"));
    let all = ok(&["verify", &g, &s, "--mode", "all", "--samples", "2"]);
    assert!(all.contains("bruteforce SKIPPED"));
    assert!(all.contains("certificate PASS"));
}

#[test]
fn render_matches_the_golden_file() {
    let d = tempfile::tempdir().unwrap();
    let (s, svg) = (path(&d, "s.json"), path(&d, "t.svg"));
    let g = fixture("triangle.json");
    let g = g.to_str().unwrap();
    ok(&["solve", g, "--variant", "sequential", "--out", &s]);
    ok(&["render", g, "--solution", &s, "--out", &svg]);
    assert_eq!(
        fs::read_to_string(&svg).unwrap(),
        fs::read_to_string(fixture("triangle.svg")).unwrap()
    );
}

#[test]
fn render_without_a_solution_has_one_layer() {
    let d = tempfile::tempdir().unwrap();
    let (a, b, c) = (path(&d, "a.svg"), path(&d, "b.svg"), path(&d, "c.svg"));
    let g = fixture("triangle.json");
    let g = g.to_str().unwrap();
    ok(&["render", g, "--out", &a]);
    ok(&["render", g, "--voronoi", "--out", &b]);
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text.matches("<g ").count(), 1);
    assert_eq!(text, fs::read_to_string(&b).unwrap());

    let s = path(&d, "s.json");
    ok(&["solve", g, "--out", &s]);
    let mut sol = Solution::load(&s).unwrap();
    sol.sites.clear();
    sol.report.plans.clear();
    sol.report.initial_circles.clear();
    sol.save(&s).unwrap();
    ok(&["render", g, "--solution", &s, "--voronoi", "--out", &c]);
    assert_eq!(text, fs::read_to_string(&c).unwrap());
}

#[test]
fn experiment_writes_records_and_summary_rows() {
    let d = tempfile::tempdir().unwrap();
    let (a, b) = (path(&d, "a.csv"), path(&d, "b.csv"));
    let args = |csv: &str| {
        vec![
            "experiment",
            "--runs",
            "3",
            "--seed",
            "9",
            "--min-points",
            "10",
            "--max-points",
            "20",
            "--csv",
        ]
        .into_iter()
        .map(String::from)
        .chain([csv.to_string()])
        .collect::<Vec<_>>()
    };
    let run = |csv: &str| ok(&args(csv).iter().map(String::as_str).collect::<Vec<_>>());
    let text = run(&a);
    run(&b);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let csv = fs::read_to_string(&a).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "run,vertices,edges,regions,sites_recursive,sites_sequential,alpha_deg,epsilon"
    );
    assert_eq!(lines.len(), 1 + 3 + 3);
    assert!(
        lines[4].starts_with("MED,")
            && lines[5].starts_with("AVG,")
            && lines[6].starts_with("STD,")
    );
    let records = read_records_file(&a).unwrap();
    assert_eq!(
        records.iter().map(|r| r.run).collect::<Vec<_>>(),
        vec![1, 2, 3]
    );
    assert!(records
        .iter()
        .all(|r| r.vertices + r.regions + 1 == r.edges + 2));
    assert!(text.contains("corr alpha_deg edges "));
    assert!(text.contains("fit sites_sequential edges slope "));
    assert!(text.contains("histogram epsilon edges "));

    let zero = givp(&["experiment", "--runs", "0", "--csv", &a]);
    assert_eq!(err_line(&zero), "error: runs must be positive");
}
