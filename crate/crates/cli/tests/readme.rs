//! Runs the `$ flatsurf ...` examples in README.md.
//!
//! Lines after a command are expected output: each must appear in stdout,
//! in order. A trailing `# exit N` sets the expected exit code.

use std::path::{Path, PathBuf};
use std::process::Command;

struct Example {
    cmd: String,
    exit: i32,
    expect: Vec<String>,
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn readme() -> String {
    std::fs::read_to_string(root().join("README.md")).unwrap()
}

fn blocks<'a>(text: &'a str, tag: &str) -> Vec<Vec<&'a str>> {
    let mut out = Vec::new();
    let mut cur: Option<(&str, Vec<&str>)> = None;
    for line in text.lines() {
        let fence = line.trim_end().strip_prefix("```");
        match (&mut cur, fence) {
            (None, Some(t)) => cur = Some((t, Vec::new())),
            (Some(_), Some("")) => {
                let (t, b) = cur.take().unwrap();
                if t == tag {
                    out.push(b);
                }
            }
            (Some((_, b)), _) => b.push(line),
            (None, None) => {}
        }
    }
    out
}

fn examples(text: &str) -> Vec<Example> {
    let mut out: Vec<Example> = Vec::new();
    for block in blocks(text, "console") {
        for line in block {
            if let Some(cmd) = line.strip_prefix("$ ") {
                let (cmd, exit) = match cmd.split_once("# exit ") {
                    Some((c, n)) => (c.trim(), n.trim().parse().unwrap()),
                    None => (cmd.trim(), 0),
                };
                out.push(Example {
                    cmd: cmd.to_string(),
                    exit,
                    expect: Vec::new(),
                });
            } else {
                out.last_mut()
                    .expect("output before any command")
                    .expect
                    .push(line.to_string());
            }
        }
    }
    out
}

#[test]
fn readme_examples_run() {
    let bin = PathBuf::from(env!("CARGO_BIN_EXE_flatsurf"));
    let path = format!(
        "{}:{}",
        bin.parent().unwrap().display(),
        std::env::var("PATH").unwrap_or_default()
    );
    let all = examples(&readme());
    assert!(all.len() >= 15, "only {} examples found", all.len());
    for ex in all {
        let out = Command::new("sh")
            .arg("-c")
            .arg(&ex.cmd)
            .current_dir(root())
            .env("PATH", &path)
            .env_remove("FLATSURF_THREADS")
            .output()
            .unwrap();
        let stdout = String::from_utf8_lossy(&out.stdout);
        assert_eq!(
            out.status.code(),
            Some(ex.exit),
            "{}\nstdout:\n{stdout}\nstderr:\n{}",
            ex.cmd,
            String::from_utf8_lossy(&out.stderr)
        );
        let mut lines = stdout.lines();
        for want in &ex.expect {
            assert!(
                lines.any(|l| l == want),
                "{}: missing or out of order: {want}\nstdout:\n{stdout}",
                ex.cmd
            );
        }
    }
}

#[test]
fn readme_file_formats_parse() {
    let text = readme();
    let docs = blocks(&text, "");
    let surf: Vec<_> = docs
        .iter()
        .filter(|b| b.first() == Some(&"flatsurf-surface 1"))
        .collect();
    let poly: Vec<_> = docs
        .iter()
        .filter(|b| b.first() == Some(&"flatsurf-polygon 1"))
        .collect();
    assert_eq!((surf.len(), poly.len()), (1, 1));
    let s = flatsurf::format::parse_surface(&surf[0].join("\n")).unwrap();
    assert_eq!(s.stratum().to_string(), "H(0)");
    let (p, name) = flatsurf::format::parse_polygon(&poly[0].join("\n")).unwrap();
    assert_eq!(p, flatsurf::corpus::triangle_pi8());
    assert_eq!(name.as_deref(), Some("triangle-pi8"));
}
