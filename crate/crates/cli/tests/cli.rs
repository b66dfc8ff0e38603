use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bellpoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellpoly"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn bellpoly_threads(threads: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellpoly"))
        .env("BELLPOLY_THREADS", threads)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Writes a binary-output table given as a closure over `(a, b, i, j)`
/// returning a numerator over `den`.
fn write_table(p: &Path, ma: usize, mb: usize, den: u32, f: impl Fn(usize, usize, usize, usize) -> u32) {
    let mut text = format!("scenario {ma} {mb} 2 2\n");
    for i in 0..ma {
        for j in 0..mb {
            for a in 0..2 {
                for b in 0..2 {
                    text.push_str(&format!("p {a} {b} {i} {j} = {}/{den}\n", f(a, b, i, j)));
                }
            }
        }
    }
    fs::write(p, text).unwrap();
}

#[test]
fn fixed_pipeline_reports_eight_nontrivial_classes() {
    let dir = TempDir::new().unwrap();
    let (v, f, c) = (path(&dir, "v.txt"), path(&dir, "f.txt"), path(&dir, "c.txt"));
    let o = bellpoly(&["vertices", "--model", "fixed-ab", "--ma", "3", "--mb", "2", "--bits", "1", "--out", s(&v)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "vertices=320");
    let o = bellpoly(&["facets", "--in", s(&v), "--out", s(&f)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "facets=864 equations=0 dimension=15");
    let o = bellpoly(&["classes", "--in", s(&f), "--out", s(&c), "--pretty-chart"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("nontrivial=8 trivial=1 total=9"));
    assert_eq!(out.matches("class ").count(), 8);
    let report = fs::read_to_string(&c).unwrap();
    assert!(report.starts_with("classes fixed 3 2 nontrivial=8 trivial=1 total=9"), "{report}");
}

#[test]
fn lsr_single_setting_has_four_vertices() {
    let dir = TempDir::new().unwrap();
    let v = path(&dir, "v.txt");
    let o = bellpoly(&["vertices", "--model", "lsr", "--ma", "1", "--mb", "1", "--out", s(&v)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "vertices=4");
}

#[test]
fn vertices_to_stdout_when_no_output_path() {
    let o = bellpoly(&["vertices", "--model", "lsr", "--ma", "1", "--mb", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("vertices bidir 1 1 0 4"), "{}", stdout(&o));
}

#[test]
fn chsh_facets_through_the_cli() {
    let dir = TempDir::new().unwrap();
    let (v, f) = (path(&dir, "v.txt"), path(&dir, "f.txt"));
    assert_eq!(code(&bellpoly(&["vertices", "--model", "lsr", "--ma", "2", "--mb", "2", "--out", s(&v)])), 0);
    assert_eq!(code(&bellpoly(&["facets", "--in", s(&v), "--out", s(&f)])), 0);
    let o = bellpoly(&["classes", "--in", s(&f)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("nontrivial=1 "), "{}", stdout(&o));
}

#[test]
fn hat_outside_and_uniform_inside_the_two_way_three_by_three_polytope() {
    let dir = TempDir::new().unwrap();
    let (v, hat, uni) = (path(&dir, "v.txt"), path(&dir, "hat.txt"), path(&dir, "uni.txt"));
    assert_eq!(code(&bellpoly(&["vertices", "--model", "bidir", "--ma", "3", "--mb", "3", "--out", s(&v)])), 0);
    assert_eq!(code(&bellpoly(&["hat", "--ma", "3", "--mb", "3", "--out", s(&hat)])), 0);
    let o = bellpoly(&["check", "--point", s(&hat), "--vertices", s(&v)]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
    assert!(stdout(&o).starts_with("outside"));

    write_table(&uni, 3, 3, 4, |_, _, _, _| 1);
    let o = bellpoly(&["check", "--point", s(&uni), "--vertices", s(&v)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).starts_with("inside"));
}

#[test]
fn check_rejects_mismatched_points() {
    let dir = TempDir::new().unwrap();
    let (v, p, t) = (path(&dir, "v.txt"), path(&dir, "p.txt"), path(&dir, "t.txt"));
    assert_eq!(code(&bellpoly(&["vertices", "--model", "lsr", "--ma", "2", "--mb", "2", "--out", s(&v)])), 0);
    fs::write(&p, "point bidir 2 2\n0\n0\n0\n").unwrap();
    assert_eq!(code(&bellpoly(&["check", "--point", s(&p), "--vertices", s(&v)])), 2);
    write_table(&t, 3, 2, 4, |_, _, _, _| 1);
    assert_eq!(code(&bellpoly(&["check", "--point", s(&t), "--vertices", s(&v)])), 2);
}

#[test]
fn stirling_prints_the_number() {
    let o = bellpoly(&["stirling", "3", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "3");
    assert_eq!(stdout(&bellpoly(&["stirling", "7", "3"])).trim(), "301");
}

#[test]
fn simulate_pr_box_with_one_bit() {
    let dir = TempDir::new().unwrap();
    let (t, e) = (path(&dir, "pr.txt"), path(&dir, "e.txt"));
    write_table(&t, 2, 2, 2, |a, b, i, j| u32::from((a ^ b) == (i & j)));
    let o = bellpoly(&["simulate", "--in", s(&t), "--out", s(&e)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "bits=1 exact=yes");
    assert!(!fs::read_to_string(&e).unwrap().is_empty());
}

#[test]
fn simulate_rejects_signaling_table() {
    let dir = TempDir::new().unwrap();
    let t = path(&dir, "ajbi.txt");
    write_table(&t, 3, 2, 1, |a, b, i, j| u32::from(a == j && b == usize::from(i == 0)));
    assert_eq!(code(&bellpoly(&["simulate", "--in", s(&t)])), 1);
}

#[test]
fn lowerbound_three_by_three() {
    let o = bellpoly(&["lowerbound", "--ma", "3", "--mb", "3", "--bits", "1"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("exhaustiveRefuted=yes"), "{out}");
    assert!(out.contains("lpOutside=yes"), "{out}");
}

#[test]
fn usage_and_format_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let bad = path(&dir, "bad.txt");
    fs::write(&bad, "scenario 2 2 2 2\np 0 0 0 0 = banana\n").unwrap();
    assert_eq!(code(&bellpoly(&["simulate", "--in", s(&bad)])), 2);
    assert_eq!(code(&bellpoly(&["facets", "--in", s(&bad)])), 2);
    assert_eq!(code(&bellpoly(&["facets", "--in", s(&path(&dir, "missing.txt"))])), 2);
    assert_eq!(code(&bellpoly(&["vertices", "--model", "nope", "--ma", "1", "--mb", "1"])), 2);
    assert_eq!(code(&bellpoly(&["vertices", "--model", "lsr", "--ma", "1", "--mb", "1", "--bogus"])), 2);
    assert_eq!(code(&bellpoly(&["stirling", "3"])), 2);
    assert_eq!(code(&bellpoly(&[])), 2);
    assert_eq!(code(&bellpoly_threads("zero", &["stirling", "3", "2"])), 2);
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let dir = TempDir::new().unwrap();
    let mut files = Vec::new();
    for threads in ["1", "3"] {
        let (v, f, c) = (
            path(&dir, &format!("v{threads}.txt")),
            path(&dir, &format!("f{threads}.txt")),
            path(&dir, &format!("c{threads}.txt")),
        );
        let run = |args: &[&str]| assert_eq!(code(&bellpoly_threads(threads, args)), 0);
        run(&["vertices", "--model", "bidir", "--ma", "2", "--mb", "2", "--out", s(&v)]);
        run(&["facets", "--in", s(&v), "--out", s(&f)]);
        run(&["classes", "--in", s(&f), "--out", s(&c)]);
        files.push([v, f, c].map(|p| fs::read(p).unwrap()));
    }
    assert_eq!(files[0], files[1]);
}
