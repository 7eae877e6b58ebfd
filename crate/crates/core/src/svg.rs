//! SVG 1.1 output for surfaces, trajectories and saddle connections.

use std::fmt::Write as _;

use thiserror::Error;

use crate::count::SaddleConnection;
use crate::flow::{FlatPolygons, Trajectory};
use crate::scalar::{Scalar, Vec2};
use crate::surface::TranslationSurface;

#[derive(Debug, Error, PartialEq)]
pub enum SvgError {
    #[error("nothing to draw")]
    Empty,
}

/// Outlines and open polylines in the plane, already laid out.
#[derive(Debug, Clone, Default)]
pub struct Scene {
    pub outlines: Vec<Vec<[f64; 2]>>,
    pub paths: Vec<Vec<[f64; 2]>>,
}

pub enum Drawable<'a> {
    Surface(&'a TranslationSurface),
    /// Polygons plus a trajectory whose segments live in them.
    Trajectory(Scene),
    Connections(&'a [SaddleConnection]),
    Scene(Scene),
}

impl<'a> Drawable<'a> {
    pub fn trajectory<S: Scalar>(polys: &FlatPolygons<S>, traj: &Trajectory<S>) -> Drawable<'a> {
        let outlines: Vec<Vec<[f64; 2]>> = polys
            .polygons
            .iter()
            .map(|p| p.iter().map(pt).collect())
            .collect();
        let offsets = layout(&outlines);
        let outlines = shift_all(&outlines, &offsets);
        let mut paths: Vec<Vec<[f64; 2]>> = Vec::new();
        let mut last: Option<(usize, Vec2<S>)> = None;
        for seg in &traj.segments {
            let o = offsets[seg.carrier];
            let a = shift(pt(&seg.start), o);
            let b = shift(pt(&seg.end), o);
            let continues = matches!(&last, Some((c, e)) if *c == seg.carrier && *e == seg.start);
            match paths.last_mut() {
                Some(path) if continues => path.push(b),
                _ => paths.push(vec![a, b]),
            }
            last = Some((seg.carrier, seg.end.clone()));
        }
        Drawable::Trajectory(Scene { outlines, paths })
    }
}

fn pt<S: Scalar>(v: &Vec2<S>) -> [f64; 2] {
    [v.x.to_f64(), v.y.to_f64()]
}

fn shift(p: [f64; 2], o: [f64; 2]) -> [f64; 2] {
    [p[0] + o[0], p[1] + o[1]]
}

fn shift_all(polys: &[Vec<[f64; 2]>], offsets: &[[f64; 2]]) -> Vec<Vec<[f64; 2]>> {
    polys
        .iter()
        .zip(offsets)
        .map(|(p, &o)| p.iter().map(|&q| shift(q, o)).collect())
        .collect()
}

fn bbox<'b>(pts: impl IntoIterator<Item = &'b [f64; 2]>) -> Option<[f64; 4]> {
    let mut it = pts.into_iter();
    let first = it.next()?;
    let mut b = [first[0], first[1], first[0], first[1]];
    for p in it {
        b[0] = b[0].min(p[0]);
        b[1] = b[1].min(p[1]);
        b[2] = b[2].max(p[0]);
        b[3] = b[3].max(p[1]);
    }
    Some(b)
}

/// Place polygons left to right with a small gap, bottoms aligned.
fn layout(polys: &[Vec<[f64; 2]>]) -> Vec<[f64; 2]> {
    let boxes: Vec<[f64; 4]> = polys.iter().map(|p| bbox(p).unwrap_or([0.0; 4])).collect();
    let size = boxes
        .iter()
        .map(|b| (b[2] - b[0]).max(b[3] - b[1]))
        .fold(0.0, f64::max);
    let gap = 0.15 * size;
    let mut cursor = 0.0;
    boxes
        .iter()
        .map(|b| {
            let o = [cursor - b[0], -b[1]];
            cursor += b[2] - b[0] + gap;
            o
        })
        .collect()
}

fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

fn coords(p: &[f64; 2]) -> String {
    // SVG's y axis points down.
    format!("{},{}", num(p[0]), num(-p[1]))
}

fn render(scene: &Scene, stroke: f64) -> String {
    let all = scene.outlines.iter().chain(&scene.paths).flatten();
    let b = bbox(all).unwrap_or([0.0, 0.0, 1.0, 1.0]);
    let w = (b[2] - b[0]).max(1e-9);
    let h = (b[3] - b[1]).max(1e-9);
    let pad = 0.05 * w.max(h);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{:.6} {:.6} {:.6} {:.6}" width="{:.0}" height="{:.0}">"#,
        b[0] - pad,
        -b[3] - pad,
        w + 2.0 * pad,
        h + 2.0 * pad,
        600.0,
        600.0 * (h + 2.0 * pad) / (w + 2.0 * pad)
    );
    for o in &scene.outlines {
        let mut d = String::new();
        for (i, p) in o.iter().enumerate() {
            let _ = write!(d, "{}{} ", if i == 0 { "M" } else { "L" }, coords(p));
        }
        d.push('Z');
        let _ = writeln!(
            out,
            r##"<path d="{d}" fill="#eef2f7" stroke="black" stroke-width="{stroke:.6}"/>"##
        );
    }
    for path in &scene.paths {
        let pts: Vec<String> = path.iter().map(coords).collect();
        let _ = writeln!(
            out,
            r##"<polyline points="{}" fill="none" stroke="#c0392b" stroke-width="{stroke:.6}"/>"##,
            pts.join(" ")
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn emit_svg(d: &Drawable<'_>) -> Result<String, SvgError> {
    let scene = match d {
        Drawable::Surface(s) => {
            let outlines: Vec<Vec<[f64; 2]>> = s
                .polygons()
                .iter()
                .map(|p| p.vertices().iter().map(pt).collect())
                .collect();
            let offsets = layout(&outlines);
            Scene {
                outlines: shift_all(&outlines, &offsets),
                paths: Vec::new(),
            }
        }
        Drawable::Trajectory(scene) | Drawable::Scene(scene) => scene.clone(),
        Drawable::Connections(list) => {
            if list.is_empty() {
                return Err(SvgError::Empty);
            }
            Scene {
                outlines: Vec::new(),
                paths: list
                    .iter()
                    .map(|c| vec![[0.0, 0.0], pt(&c.holonomy)])
                    .collect(),
            }
        }
    };
    if scene.outlines.is_empty() && scene.paths.is_empty() {
        return Err(SvgError::Empty);
    }
    let extent = bbox(scene.outlines.iter().chain(&scene.paths).flatten())
        .map(|b| (b[2] - b[0]).max(b[3] - b[1]))
        .unwrap_or(1.0);
    Ok(render(&scene, extent / 300.0))
}
