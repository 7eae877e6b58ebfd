//! Reading documents and command-line numbers.

use std::io::Read;

use flatsurf::format::{parse_polygon, parse_surface, FormatError, POLYGON_HEADER, SURFACE_HEADER};
use flatsurf::unfold::RationalPolygon;
use flatsurf::{AlgNum, PlanarVec, TranslationSurface, Vec2};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::Failure;

pub fn read_text(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::error(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::error(format!("{path}: {e}")))
    }
}

pub enum Document {
    Surface(TranslationSurface),
    Polygon(RationalPolygon, Option<String>),
}

fn header(text: &str) -> Option<&str> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
}

pub fn read_document(path: &str) -> Result<Document, Failure> {
    let text = read_text(path)?;
    let ctx = |e: FormatError| match e {
        FormatError::Syntax { .. } => Failure::error(format!("{path}:{e}")),
        _ => Failure::error(format!("{path}: {e}")),
    };
    match header(&text) {
        Some(POLYGON_HEADER) => {
            let (p, name) = parse_polygon(&text).map_err(ctx)?;
            Ok(Document::Polygon(p, name))
        }
        _ => Ok(Document::Surface(parse_surface(&text).map_err(ctx)?)),
    }
}

pub fn read_surface(path: &str) -> Result<TranslationSurface, Failure> {
    match read_document(path)? {
        Document::Surface(s) => Ok(s),
        Document::Polygon(..) => Err(Failure::error(format!(
            "{path}: expected a surface ('{SURFACE_HEADER}'), found a polygon"
        ))),
    }
}

pub fn read_polygon(path: &str) -> Result<(RationalPolygon, Option<String>), Failure> {
    match read_document(path)? {
        Document::Polygon(p, n) => Ok((p, n)),
        Document::Surface(_) => Err(Failure::error(format!(
            "{path}: expected a polygon ('{POLYGON_HEADER}'), found a surface"
        ))),
    }
}

/// An exact number: `3`, `-1/2`, `0.25`, `sqrt2`, `-sqrt2` or `{level, [..]}`.
pub fn parse_num(s: &str) -> Result<AlgNum, Failure> {
    let s = s.trim();
    let bad = || Failure::error(format!("bad number '{s}'"));
    if let Some(rest) = s.strip_suffix("sqrt2") {
        let k = match rest {
            "" => AlgNum::one(),
            "-" => -AlgNum::one(),
            r => parse_num(r.strip_suffix('*').unwrap_or(r))?,
        };
        return Ok(&k * &AlgNum::sqrt2());
    }
    if let Ok(v) = s.parse::<AlgNum>() {
        return Ok(v);
    }
    // finite decimals are read exactly
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').ok_or_else(bad)?;
    if !(int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())) || int.len() + frac.len() == 0
    {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}0").parse().map_err(|_| bad())?;
    let den = BigInt::from(10).pow(frac.len() as u32 + 1);
    let r = BigRational::new(if neg { -digits } else { digits }, den);
    Ok(AlgNum::from_rational(&r))
}

/// Split on commas outside `{...}`.
fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '{' => depth += 1,
            '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

pub fn parse_nums(s: &str, n: usize) -> Result<Vec<AlgNum>, Failure> {
    let parts = split_top(s);
    if parts.len() != n {
        return Err(Failure::error(format!(
            "expected {n} comma-separated numbers, got '{s}'"
        )));
    }
    parts.into_iter().map(parse_num).collect()
}

pub fn parse_vec(s: &str) -> Result<PlanarVec, Failure> {
    let v = parse_nums(s, 2)?;
    Ok(Vec2::new(v[0].clone(), v[1].clone()))
}

pub fn parse_floats(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Failure::error(format!("bad number '{p}'")))
        })
        .collect()
}
