use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .unwrap()
}

fn corpus(name: &str) -> String {
    root()
        .join("crates/core/corpus")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flatsurf"))
        .args(args)
        .env_remove("FLATSURF_THREADS")
        .output()
        .unwrap()
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_flatsurf"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn info_octagon() {
    let o = run(&["info", &corpus("octagon.surf")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for line in [
        "genus: 2",
        "stratum: H(2)",
        "dimension: 4",
        "vertex 0: angle 6π, order 2, 8 corners",
    ] {
        assert!(out.lines().any(|l| l == line), "missing '{line}' in\n{out}");
    }
}

#[test]
fn unfold_pipes_into_info() {
    let u = run(&["unfold", &corpus("triangle-pi8.poly")]);
    assert_eq!(u.status.code(), Some(0));
    assert!(stdout(&u).starts_with("# 16 copies\n"));
    let o = run_stdin(&["info", "-"], &u.stdout);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("stratum: H(2)\n"));
}

#[test]
fn equiv_exit_codes() {
    let yes = run(&[
        "equiv",
        &corpus("torus.surf"),
        &corpus("sheared-torus.surf"),
    ]);
    assert_eq!(yes.status.code(), Some(0));
    let no = run(&[
        "equiv",
        &corpus("torus.surf"),
        &corpus("rotated-torus.surf"),
    ]);
    assert_eq!(no.status.code(), Some(1));
    assert!(stdout(&no).starts_with("not equivalent"));
    let bad = run(&["equiv", &corpus("torus.surf")]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn errors_exit_two() {
    let dir = std::env::temp_dir().join(format!("flatsurf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("dangling.surf");
    std::fs::write(
        &f,
        "flatsurf-surface 1\npolygon A\n0 0\n1 0\n1 1\n0 1\nend\nglue A:0 B:2\n",
    )
    .unwrap();
    let o = run(&["validate", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains(":8:10:"), "{err}");
    assert_eq!(run(&["info", "/nonexistent/file"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    // a polygon where a surface is expected
    assert_eq!(
        run(&["count", &corpus("square.poly"), "--length", "2"])
            .status
            .code(),
        Some(2)
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn validate_whole_corpus() {
    let mut files: Vec<String> = std::fs::read_dir(root().join("crates/core/corpus"))
        .unwrap()
        .map(|e| e.unwrap().path().to_string_lossy().into_owned())
        .collect();
    files.sort();
    let mut args = vec!["validate"];
    args.extend(files.iter().map(String::as_str));
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), files.len());
}

#[test]
fn illuminate_exit_codes() {
    let found = run(&[
        "illuminate",
        &corpus("l-shape.poly"),
        "--from",
        "0.5,0.5",
        "--to",
        "0.5,1.5",
        "--length",
        "5",
    ]);
    assert_eq!(found.status.code(), Some(0));
    assert!(
        stdout(&found).contains("# termination: vertex")
            || stdout(&found).contains("# length: 1.0")
    );
    let short = run(&[
        "illuminate",
        &corpus("l-shape.poly"),
        "--from",
        "1.5,0.5",
        "--to",
        "0.5,1.5",
        "--length",
        "1",
    ]);
    assert_eq!(short.status.code(), Some(1));
    assert!(stdout(&short).starts_with("not found"));
}

#[test]
fn count_matches_lattice() {
    let o = run(&["count", &corpus("torus.surf"), "--length", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    // primitive integer vectors of length at most 2
    assert!(out.contains("# count: 8\n"), "{out}");
    let header = out.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "holonomy_x,holonomy_y,length,source,target");
}

#[test]
fn growth_and_diagonals() {
    let g = stdout(&run(&[
        "growth",
        &corpus("torus.surf"),
        "--lengths",
        "5,10",
    ]));
    let rows: Vec<&str> = g.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "l,count,ratio,cesaro");
    assert_eq!(rows.len(), 3);
    let d = stdout(&run(&[
        "diagonals",
        &corpus("square.poly"),
        "--length",
        "1.01",
    ]));
    assert!(d.contains("# count: 4\n"), "{d}");
}

#[test]
fn flow_and_billiard() {
    let b = run(&[
        "billiard",
        &corpus("square.poly"),
        "--start",
        "1/2,1/2",
        "--dir",
        "1,2",
        "--length",
        "100",
    ]);
    assert_eq!(b.status.code(), Some(0));
    let out = stdout(&b);
    assert!(out.contains("# termination: periodic\n"));
    assert!(out.contains("# length: 4.472135955000\n"));
    let f = stdout(&run(&[
        "flow",
        &corpus("torus.surf"),
        "--start",
        "0.1,0.2",
        "--dir",
        "1,sqrt2",
        "--lengths",
        "10,100",
    ]));
    let disc: Vec<f64> = f
        .lines()
        .filter(|l| l.starts_with(|c: char| c.is_ascii_digit()))
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(disc.len(), 2);
    assert!(disc[1] < disc[0]);
}

#[test]
fn svg_outputs() {
    let dir = std::env::temp_dir().join(format!("flatsurf-svg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let r = run(&["render", &corpus("torus.surf")]);
    let svg = stdout(&r);
    assert!(svg.starts_with("<?xml") && svg.contains("version=\"1.1\""));
    assert_eq!(svg.matches("<path").count(), 1);
    let out = dir.join("billiard.svg");
    let b = run(&[
        "billiard",
        &corpus("triangle-pi8.poly"),
        "--start",
        "0.5,0.1",
        "--dir",
        "1,3",
        "--length",
        "5",
        "--svg",
        out.to_str().unwrap(),
    ]);
    assert_eq!(b.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("<polyline"));
    let w = dir.join("wt.svg");
    let o = run(&[
        "windtree",
        "--T",
        "2000",
        "--runs",
        "2",
        "--svg",
        w.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read_to_string(&w).unwrap().contains("<polyline"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn deterministic_across_threads() {
    let args = ["windtree", "--T", "5000", "--runs", "6", "--seed", "9"];
    let one = run(&args);
    let mut four_args = args.to_vec();
    four_args.extend(["--threads", "4"]);
    let four = run(&four_args);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(run(&args).stdout, one.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_flatsurf"))
        .args(args)
        .env("FLATSURF_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(env.stdout, one.stdout);
    let c1 = run(&["count", &corpus("octagon.surf"), "--length", "6"]);
    let c4 = run(&[
        "count",
        &corpus("octagon.surf"),
        "--length",
        "6",
        "--threads",
        "4",
    ]);
    assert_eq!(c1.stdout, c4.stdout);
}

#[test]
fn apply_and_canonicalize() {
    let a = run(&["apply", &corpus("torus.surf"), "--matrix", "1,1,0,1"]);
    assert_eq!(a.status.code(), Some(0));
    let c = run_stdin(&["canonicalize", "-"], &a.stdout);
    let t = run(&["canonicalize", &corpus("torus.surf")]);
    let body = |o: &Output| {
        stdout(o)
            .lines()
            .filter(|l| !l.starts_with("name"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(body(&c), body(&t));
    let sing = run(&["apply", &corpus("torus.surf"), "--matrix", "1,1,1,1"]);
    assert_eq!(sing.status.code(), Some(2));
    let g = stdout(&run(&[
        "gt-orbit",
        &corpus("torus.surf"),
        "--t-max",
        "1",
        "--dt",
        "0.5",
    ]));
    assert!(g.contains("\n1.000000000000,0.367879441171,"), "{g}");
}
