//! Line-based text formats for surfaces and billiard tables.
//!
//! ```text
//! flatsurf-surface 1
//! level 8
//! name regular octagon
//! polygon A
//! 0 0
//! 1 0
//! {8, [1, 1/2, 0, -1/2]} {8, [0, 1/2, 0, 1/2]}
//! ...
//! end
//! glue A:0 A:4
//! ```
//!
//! Numbers are either rationals (`3`, `-1/2`) or field elements in the
//! `{level, [c0, c1, ...]}` notation. Blank lines and `#` comments are
//! ignored. A polygon file has the header `flatsurf-polygon 1`, a single
//! polygon block and no `glue` lines.

use std::fmt::Write as _;

use thiserror::Error;

use crate::algnum::{lcm_levels, AlgNum};
use crate::scalar::{PlanarVec, Vec2};
use crate::surface::{EdgeRef, Polygon, SurfaceError, TranslationSurface};
use crate::unfold::{RationalPolygon, UnfoldError};

pub const SURFACE_HEADER: &str = "flatsurf-surface 1";
pub const POLYGON_HEADER: &str = "flatsurf-polygon 1";

#[derive(Debug, Error, PartialEq)]
pub enum FormatError {
    #[error("{line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("invalid surface: {0}")]
    Surface(#[from] SurfaceError),
    #[error("invalid polygon: {0}")]
    Polygon(#[from] UnfoldError),
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        col,
        message: message.into(),
    }
}

/// A token with its 1-based column.
type Token<'a> = (usize, &'a str);

/// Split a line into whitespace-separated tokens, keeping `{...}` groups whole.
fn tokenize(line: &str, lineno: usize) -> Result<Vec<Token<'_>>, FormatError> {
    let mut out = Vec::new();
    let bytes = line.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c == b'#' {
            break;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c == b'{' {
            match line[i..].find('}') {
                Some(j) => i += j + 1,
                None => return Err(syntax(lineno, start + 1, "unclosed '{'")),
            }
        } else {
            while i < bytes.len() && !bytes[i].is_ascii_whitespace() && bytes[i] != b'#' {
                i += 1;
            }
        }
        out.push((start + 1, &line[start..i]));
    }
    Ok(out)
}

struct Parsed {
    level: Option<u32>,
    name: Option<String>,
    polygons: Vec<(String, Vec<PlanarVec>, usize)>,
    glues: Vec<(EdgeRef, EdgeRef)>,
}

fn parse_number(tok: Token<'_>, lineno: usize) -> Result<AlgNum, FormatError> {
    let v: AlgNum = tok
        .1
        .parse()
        .map_err(|_| syntax(lineno, tok.0, format!("bad number '{}'", tok.1)))?;
    if !v.is_real() {
        return Err(syntax(lineno, tok.0, "coordinates must be real"));
    }
    Ok(v)
}

fn parse_doc(text: &str, header: &str) -> Result<Parsed, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });
    match lines.next() {
        Some((_, l)) if l.split('#').next().unwrap_or("").trim() == header => {}
        Some((n, _)) => return Err(syntax(n, 1, format!("expected header '{header}'"))),
        None => return Err(syntax(1, 1, "empty document")),
    }
    let mut out = Parsed {
        level: None,
        name: None,
        polygons: Vec::new(),
        glues: Vec::new(),
    };
    let mut current: Option<(String, Vec<PlanarVec>, usize)> = None;
    let mut pending_glues: Vec<(usize, Token<'_>, Token<'_>)> = Vec::new();
    for (n, line) in lines {
        let toks = tokenize(line, n)?;
        let Some(&(col, key)) = toks.first() else {
            continue;
        };
        if let Some(poly) = current.as_mut() {
            if key == "end" {
                if toks.len() > 1 {
                    return Err(syntax(n, toks[1].0, "unexpected token after 'end'"));
                }
                out.polygons
                    .push(current.take().expect("inside a polygon block"));
                continue;
            }
            if toks.len() != 2 {
                return Err(syntax(n, col, "expected a vertex: two numbers"));
            }
            let x = parse_number(toks[0], n)?;
            let y = parse_number(toks[1], n)?;
            poly.1.push(Vec2::new(x, y));
            continue;
        }
        match key {
            "level" => {
                let t = toks.get(1).ok_or_else(|| syntax(n, col, "missing level"))?;
                let v: u32 = t.1.parse().map_err(|_| syntax(n, t.0, "bad level"))?;
                if v == 0 {
                    return Err(syntax(n, t.0, "level must be positive"));
                }
                out.level = Some(v);
            }
            "name" => {
                let rest = line.trim_start()["name".len()..].trim();
                let rest = rest.split('#').next().unwrap_or("").trim();
                out.name = Some(rest.to_string());
            }
            "polygon" => {
                let label = match toks.get(1) {
                    Some(t) => t.1.to_string(),
                    None => format!("P{}", out.polygons.len()),
                };
                if label.contains(':') {
                    return Err(syntax(n, toks[1].0, "labels may not contain ':'"));
                }
                current = Some((label, Vec::new(), n));
            }
            "glue" => {
                if toks.len() != 3 {
                    return Err(syntax(n, col, "expected 'glue LABEL:EDGE LABEL:EDGE'"));
                }
                pending_glues.push((n, toks[1], toks[2]));
            }
            other => return Err(syntax(n, col, format!("unknown keyword '{other}'"))),
        }
    }
    if let Some((_, _, n)) = current {
        return Err(syntax(n, 1, "polygon block is missing 'end'"));
    }
    for (n, a, b) in pending_glues {
        let ea = resolve_edge(&out.polygons, a, n)?;
        let eb = resolve_edge(&out.polygons, b, n)?;
        out.glues.push((ea, eb));
    }
    Ok(out)
}

fn resolve_edge(
    polys: &[(String, Vec<PlanarVec>, usize)],
    tok: Token<'_>,
    n: usize,
) -> Result<EdgeRef, FormatError> {
    let (label, edge) = tok
        .1
        .rsplit_once(':')
        .ok_or_else(|| syntax(n, tok.0, format!("bad edge reference '{}'", tok.1)))?;
    let p = polys
        .iter()
        .position(|(l, _, _)| l == label)
        .ok_or_else(|| syntax(n, tok.0, format!("no polygon labelled '{label}'")))?;
    let e: usize = edge
        .parse()
        .map_err(|_| syntax(n, tok.0, format!("bad edge index '{edge}'")))?;
    if e >= polys[p].1.len() {
        return Err(syntax(
            n,
            tok.0,
            format!("polygon '{label}' has no edge {e}"),
        ));
    }
    Ok(EdgeRef::new(p, e))
}

fn check_level(parsed: &Parsed) -> Result<(), FormatError> {
    if let Some(level) = parsed.level {
        for (_, verts, line) in &parsed.polygons {
            let l = lcm_levels(verts.iter().map(|v| v.level()));
            if level % l != 0 {
                return Err(syntax(
                    *line,
                    1,
                    format!("coordinates need level {l}, which does not divide {level}"),
                ));
            }
        }
    }
    Ok(())
}

pub fn parse_surface(text: &str) -> Result<TranslationSurface, FormatError> {
    let parsed = parse_doc(text, SURFACE_HEADER)?;
    check_level(&parsed)?;
    let level = parsed.level;
    let polys: Vec<Polygon> = parsed
        .polygons
        .into_iter()
        .map(|(l, v, _)| {
            let v = match level {
                Some(n) => v.iter().map(|p| p.lift(n)).collect(),
                None => v,
            };
            Polygon::new(l, v)
        })
        .collect();
    let s = TranslationSurface::new(polys, &parsed.glues)?;
    Ok(match parsed.name {
        Some(n) => s.with_name(n),
        None => s,
    })
}

/// A billiard table with its optional name.
pub fn parse_polygon(text: &str) -> Result<(RationalPolygon, Option<String>), FormatError> {
    let parsed = parse_doc(text, POLYGON_HEADER)?;
    check_level(&parsed)?;
    if !parsed.glues.is_empty() {
        return Err(syntax(1, 1, "polygon files take no glue lines"));
    }
    let mut polys = parsed.polygons;
    if polys.len() != 1 {
        return Err(syntax(
            1,
            1,
            format!("expected one polygon, found {}", polys.len()),
        ));
    }
    let (_, verts, _) = polys.pop().expect("one polygon");
    Ok((RationalPolygon::new(verts)?, parsed.name))
}

fn number(x: &AlgNum) -> String {
    match x.to_rational() {
        Some(r) => r.to_string(),
        None => x.to_string(),
    }
}

fn emit_vertices(out: &mut String, verts: &[PlanarVec]) {
    for v in verts {
        let _ = writeln!(out, "{} {}", number(&v.x), number(&v.y));
    }
}

pub fn emit_surface(s: &TranslationSurface) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{SURFACE_HEADER}");
    let _ = writeln!(out, "level {}", s.level());
    if let Some(name) = &s.name {
        let _ = writeln!(out, "name {name}");
    }
    for p in s.polygons() {
        let _ = writeln!(out, "polygon {}", p.label);
        emit_vertices(&mut out, p.vertices());
        let _ = writeln!(out, "end");
    }
    for (a, b) in s.pairs() {
        let _ = writeln!(
            out,
            "glue {}:{} {}:{}",
            s.polygon(a.polygon).label,
            a.edge,
            s.polygon(b.polygon).label,
            b.edge
        );
    }
    out
}

pub fn emit_polygon(p: &RationalPolygon, name: Option<&str>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{POLYGON_HEADER}");
    let level = lcm_levels(p.vertices().iter().map(|v| v.level()));
    let _ = writeln!(out, "level {level}");
    if let Some(n) = name {
        let _ = writeln!(out, "name {n}");
    }
    let _ = writeln!(out, "polygon P");
    emit_vertices(&mut out, p.vertices());
    let _ = writeln!(out, "end");
    out
}
