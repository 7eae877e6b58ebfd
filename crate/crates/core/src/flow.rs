//! Billiards in polygons and straight-line flow on translation surfaces,
//! in exact or floating-point arithmetic, plus the statistics built on them.

use std::collections::{HashSet, VecDeque};

use thiserror::Error;

use crate::algnum::AlgNum;
use crate::geom::{self, Location};
use crate::gl2::FieldMatrix;
use crate::scalar::{PlanarVec, Scalar, Vec2};
use crate::surface::{EdgeRef, TranslationSurface};
use crate::unfold::{unfold, RationalPolygon, UnfoldError, Unfolding};

#[derive(Debug, Error, PartialEq)]
pub enum FlowError {
    #[error("start point is not in the polygon")]
    StartOutsidePolygon,
    #[error("start point is not on the surface")]
    StartNotOnSurface,
    #[error("start point is a vertex")]
    StartAtVertex,
    #[error("direction is zero")]
    ZeroDirection,
    #[error("length must be positive and finite")]
    BadLength,
    #[error("grid size must be at least 2")]
    BadGrid,
    #[error(transparent)]
    Unfold(#[from] UnfoldError),
}

#[derive(Debug, Clone)]
pub struct FlowOptions {
    /// Float mode only: distance under which a crossing counts as a vertex
    /// hit and a state counts as the start state.
    pub eps: f64,
    pub max_segments: usize,
    /// Stop at the first return to the start state.
    pub stop_at_period: bool,
}

impl Default for FlowOptions {
    fn default() -> FlowOptions {
        FlowOptions {
            eps: 1e-9,
            max_segments: 10_000_000,
            stop_at_period: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    LengthBudget,
    /// Stopped on the given vertex of the carrier polygon.
    VertexHit(usize),
    PeriodClosed,
    SegmentCap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Segment<S: Scalar> {
    pub start: Vec2<S>,
    pub end: Vec2<S>,
    /// Polygon index the segment lies in; always 0 for billiards.
    pub carrier: usize,
    /// Velocity along the segment. Its norm is the same on every segment.
    pub direction: Vec2<S>,
}

impl<S: Scalar> Segment<S> {
    pub fn length_f64(&self) -> f64 {
        (&self.end - &self.start).length_f64()
    }
}

/// A piecewise linear path. Lengths are `param · |direction|`, with `param`
/// exact in exact mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<S: Scalar> {
    pub segments: Vec<Segment<S>>,
    pub param: S,
    pub dir_norm2: S,
    pub termination: Termination,
    /// Returns to the start state seen along the way.
    pub periods: usize,
}

impl<S: Scalar> Trajectory<S> {
    pub fn length(&self) -> f64 {
        self.param.to_f64() * self.dir_norm2.to_f64().sqrt()
    }

    /// Squared total length, exact in exact mode.
    pub fn length2(&self) -> S {
        self.param.clone() * self.param.clone() * self.dir_norm2.clone()
    }

    pub fn end(&self) -> Option<&Vec2<S>> {
        self.segments.last().map(|s| &s.end)
    }
}

/// Polygons with an edge pairing, in any scalar. The flow only needs this
/// much of a surface.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatPolygons<S: Scalar> {
    pub polygons: Vec<Vec<Vec2<S>>>,
    pub partner: Vec<Vec<EdgeRef>>,
}

impl FlatPolygons<AlgNum> {
    pub fn from_surface(s: &TranslationSurface) -> FlatPolygons<AlgNum> {
        let polygons: Vec<Vec<PlanarVec>> =
            s.polygons().iter().map(|p| p.vertices().to_vec()).collect();
        let partner = polygons
            .iter()
            .enumerate()
            .map(|(p, poly)| {
                (0..poly.len())
                    .map(|i| s.partner(EdgeRef::new(p, i)))
                    .collect()
            })
            .collect();
        FlatPolygons { polygons, partner }
    }

    pub fn to_f64(&self) -> FlatPolygons<f64> {
        FlatPolygons {
            polygons: self
                .polygons
                .iter()
                .map(|p| p.iter().map(|v| v.to_f64()).collect())
                .collect(),
            partner: self.partner.clone(),
        }
    }
}

impl<S: Scalar> FlatPolygons<S> {
    pub fn area_f64(&self) -> f64 {
        self.polygons
            .iter()
            .map(|p| geom::signed_area2(p).to_f64() / 2.0)
            .sum()
    }
}

struct Exit<S: Scalar> {
    s: S,
    point: Vec2<S>,
    edge: usize,
    vertex: Option<usize>,
}

/// First boundary point hit by the ray `p + s·d`, `s > 0`, ignoring edge `skip`.
fn exit<S: Scalar>(
    poly: &[Vec2<S>],
    p: &Vec2<S>,
    d: &Vec2<S>,
    skip: Option<usize>,
    eps: f64,
) -> Option<Exit<S>> {
    let n = poly.len();
    let dlen = d.length_f64();
    let mut best: Option<Exit<S>> = None;
    for i in 0..n {
        if Some(i) == skip {
            continue;
        }
        let a = &poly[i];
        let e = &poly[(i + 1) % n] - a;
        let denom = d.cross(&e);
        if denom.signum() == 0 {
            continue;
        }
        let ap = a - p;
        let s = ap.cross(&e) / denom.clone();
        let u = ap.cross(d) / denom;
        let (s_ok, u_ok) = if S::EXACT {
            (
                s.signum() > 0,
                u.signum() >= 0 && (S::one() - u.clone()).signum() >= 0,
            )
        } else {
            let tol = eps / e.length_f64();
            let (sf, uf) = (s.to_f64(), u.to_f64());
            (sf * dlen > eps, uf >= -tol && uf <= 1.0 + tol)
        };
        if !s_ok || !u_ok {
            continue;
        }
        if let Some(b) = &best {
            if (s.clone() - b.s.clone()).signum() >= 0 {
                continue;
            }
        }
        let point = p + &d.scale(&s);
        let j = (i + 1) % n;
        let vertex = if S::EXACT {
            if u.is_zero() {
                Some(i)
            } else if u == S::one() {
                Some(j)
            } else {
                None
            }
        } else if (&point - &poly[i]).length_f64() < eps {
            Some(i)
        } else if (&point - &poly[j]).length_f64() < eps {
            Some(j)
        } else {
            None
        };
        let point = match vertex {
            Some(v) => poly[v].clone(),
            None => point,
        };
        best = Some(Exit {
            s,
            point,
            edge: i,
            vertex,
        });
    }
    best
}

/// Whether `x` lies on the segment from `a` to `b`, excluding `a`.
fn hits_start<S: Scalar>(x: &Vec2<S>, a: &Vec2<S>, b: &Vec2<S>, eps: f64) -> bool {
    if S::EXACT {
        x != a && geom::on_segment(x, a, b)
    } else {
        let ab = (b - a).to_f64();
        let ax = (x - a).to_f64();
        let len = ab.length_f64();
        let t = ax.dot(&ab) / (len * len);
        let dist = ax.cross(&ab).abs() / len;
        dist < eps && t * len > eps && t <= 1.0 + eps / len
    }
}

fn same_direction<S: Scalar>(a: &Vec2<S>, b: &Vec2<S>, eps: f64) -> bool {
    if S::EXACT {
        a == b
    } else {
        (a - b).length_f64() <= eps * a.length_f64()
    }
}

fn reflect<S: Scalar>(d: &Vec2<S>, e: &Vec2<S>) -> Vec2<S> {
    let k = (d.dot(e) + d.dot(e)) / e.norm2();
    &e.scale(&k) - d
}

/// Parameter budget for a requested length: exact in exact mode up to the
/// rounding of `max_len / |d|` to a double.
fn param_budget<S: Scalar>(d: &Vec2<S>, max_len: f64) -> Result<S, FlowError> {
    if !(max_len > 0.0 && max_len.is_finite()) {
        return Err(FlowError::BadLength);
    }
    Ok(S::from_f64(max_len / d.length_f64()))
}

/// Where a move ends: truncated at the budget, or at the exit point.
enum Step<S: Scalar> {
    Budget(Vec2<S>, S),
    Full(Exit<S>),
}

fn step<S: Scalar>(e: Exit<S>, p: &Vec2<S>, d: &Vec2<S>, used: &S, budget: &S) -> Step<S> {
    let left = budget.clone() - used.clone();
    if (e.s.clone() - left.clone()).signum() > 0 {
        let end = p + &d.scale(&left);
        Step::Budget(end, left)
    } else {
        Step::Full(e)
    }
}

/// The billiard path from `start` in direction `dir`, reflecting off the
/// sides of the counterclockwise polygon `poly`. Corner starts are refused.
pub fn billiard<S: Scalar>(
    poly: &[Vec2<S>],
    start: &Vec2<S>,
    dir: &Vec2<S>,
    max_len: f64,
    opts: &FlowOptions,
) -> Result<Trajectory<S>, FlowError> {
    if dir.is_zero() {
        return Err(FlowError::ZeroDirection);
    }
    let budget = param_budget(dir, max_len)?;
    billiard_param(poly, start, dir, budget, false, opts)
}

/// As [`billiard`], with the budget given as a multiple of `dir`.
pub(crate) fn billiard_param<S: Scalar>(
    poly: &[Vec2<S>],
    start: &Vec2<S>,
    dir: &Vec2<S>,
    budget: S,
    allow_corner: bool,
    opts: &FlowOptions,
) -> Result<Trajectory<S>, FlowError> {
    let n = poly.len();
    let mut d = dir.clone();
    let mut skip = None;
    match locate_eps(start, poly, opts.eps) {
        Location::Outside => return Err(FlowError::StartOutsidePolygon),
        Location::Vertex(_) if !allow_corner => return Err(FlowError::StartOutsidePolygon),
        Location::Edge(i) => {
            let e = &poly[(i + 1) % n] - &poly[i];
            if e.cross(&d).signum() < 0 {
                d = reflect(&d, &e);
            }
            if e.cross(&d).signum() != 0 {
                skip = Some(i);
            }
        }
        _ => {}
    }
    let d0 = d.clone();
    let mut traj = Trajectory {
        segments: Vec::new(),
        param: S::zero(),
        dir_norm2: d.norm2(),
        termination: Termination::LengthBudget,
        periods: 0,
    };
    let mut p = start.clone();
    loop {
        if traj.segments.len() >= opts.max_segments {
            traj.termination = Termination::SegmentCap;
            return Ok(traj);
        }
        let Some(ex) = exit(poly, &p, &d, skip, opts.eps) else {
            // Only reachable through float rounding at a corner.
            traj.termination = Termination::VertexHit(nearest_vertex(poly, &p));
            return Ok(traj);
        };
        if !traj.segments.is_empty()
            && same_direction(&d, &d0, opts.eps)
            && hits_start(start, &p, &ex.point, opts.eps)
        {
            let s = param_along(&p, start, &d);
            if (s.clone() - (budget.clone() - traj.param.clone())).signum() <= 0 {
                push(&mut traj, p.clone(), start.clone(), 0, &d, s);
                traj.periods += 1;
                if opts.stop_at_period {
                    traj.termination = Termination::PeriodClosed;
                    return Ok(traj);
                }
                p = start.clone();
                continue;
            }
        }
        match step(ex, &p, &d, &traj.param, &budget) {
            Step::Budget(end, s) => {
                push(&mut traj, p, end, 0, &d, s);
                return Ok(traj);
            }
            Step::Full(ex) => {
                push(&mut traj, p, ex.point.clone(), 0, &d, ex.s);
                if let Some(v) = ex.vertex {
                    traj.termination = Termination::VertexHit(v);
                    return Ok(traj);
                }
                let e = &poly[(ex.edge + 1) % n] - &poly[ex.edge];
                d = reflect(&d, &e);
                p = ex.point;
                skip = Some(ex.edge);
            }
        }
    }
}

fn push<S: Scalar>(
    traj: &mut Trajectory<S>,
    start: Vec2<S>,
    end: Vec2<S>,
    carrier: usize,
    d: &Vec2<S>,
    s: S,
) {
    traj.param = traj.param.clone() + s;
    traj.segments.push(Segment {
        start,
        end,
        carrier,
        direction: d.clone(),
    });
}

/// `s` with `p + s·d = x`, for `x` on the ray.
fn param_along<S: Scalar>(p: &Vec2<S>, x: &Vec2<S>, d: &Vec2<S>) -> S {
    (x - p).dot(d) / d.norm2()
}

fn nearest_vertex<S: Scalar>(poly: &[Vec2<S>], p: &Vec2<S>) -> usize {
    (0..poly.len())
        .min_by(|&a, &b| {
            let da = (&poly[a] - p).length_f64();
            let db = (&poly[b] - p).length_f64();
            da.total_cmp(&db)
        })
        .unwrap_or(0)
}

fn locate_eps<S: Scalar>(p: &Vec2<S>, poly: &[Vec2<S>], eps: f64) -> Location {
    if S::EXACT {
        return geom::locate(p, poly);
    }
    let n = poly.len();
    for (i, v) in poly.iter().enumerate() {
        if (v - p).length_f64() < eps {
            return Location::Vertex(i);
        }
    }
    for i in 0..n {
        let a = poly[i].to_f64();
        let b = poly[(i + 1) % n].to_f64();
        let q = p.to_f64();
        let ab = &b - &a;
        let t = (&q - &a).dot(&ab) / ab.norm2();
        if (0.0..=1.0).contains(&t) && ((&q - &a).cross(&ab)).abs() / ab.length_f64() < eps {
            return Location::Edge(i);
        }
    }
    geom::locate(p, poly)
}

/// Straight-line flow on a surface from a point of polygon `start_polygon`.
/// Crossing an edge continues in the partner polygon by the gluing
/// translation; hitting a vertex stops the flow.
pub fn linear_flow<S: Scalar>(
    surf: &FlatPolygons<S>,
    start_polygon: usize,
    start: &Vec2<S>,
    dir: &Vec2<S>,
    max_len: f64,
    opts: &FlowOptions,
) -> Result<Trajectory<S>, FlowError> {
    if dir.is_zero() {
        return Err(FlowError::ZeroDirection);
    }
    let budget = param_budget(dir, max_len)?;
    linear_flow_param(surf, start_polygon, start, dir, budget, opts)
}

pub(crate) fn linear_flow_param<S: Scalar>(
    surf: &FlatPolygons<S>,
    start_polygon: usize,
    start: &Vec2<S>,
    dir: &Vec2<S>,
    budget: S,
    opts: &FlowOptions,
) -> Result<Trajectory<S>, FlowError> {
    let poly0 = surf
        .polygons
        .get(start_polygon)
        .ok_or(FlowError::StartNotOnSurface)?;
    let mut carrier = start_polygon;
    let mut p = start.clone();
    let mut skip = None;
    match locate_eps(start, poly0, opts.eps) {
        Location::Outside => return Err(FlowError::StartNotOnSurface),
        Location::Vertex(_) => return Err(FlowError::StartAtVertex),
        Location::Edge(i) => {
            let n = poly0.len();
            let e = &poly0[(i + 1) % n] - &poly0[i];
            match e.cross(dir).signum() {
                1 => skip = Some(i),
                -1 => {
                    let f = surf.partner[carrier][i];
                    p = cross_edge(surf, carrier, i, &p);
                    carrier = f.polygon;
                    skip = Some(f.edge);
                }
                _ => {}
            }
        }
        Location::Inside => {}
    }
    let (start_carrier, start_point) = (carrier, p.clone());
    let mut traj = Trajectory {
        segments: Vec::new(),
        param: S::zero(),
        dir_norm2: dir.norm2(),
        termination: Termination::LengthBudget,
        periods: 0,
    };
    loop {
        if traj.segments.len() >= opts.max_segments {
            traj.termination = Termination::SegmentCap;
            return Ok(traj);
        }
        let poly = &surf.polygons[carrier];
        let Some(ex) = exit(poly, &p, dir, skip, opts.eps) else {
            traj.termination = Termination::VertexHit(nearest_vertex(poly, &p));
            return Ok(traj);
        };
        if carrier == start_carrier
            && !traj.segments.is_empty()
            && hits_start(&start_point, &p, &ex.point, opts.eps)
        {
            let s = param_along(&p, &start_point, dir);
            if (s.clone() - (budget.clone() - traj.param.clone())).signum() <= 0 {
                push(&mut traj, p.clone(), start_point.clone(), carrier, dir, s);
                traj.periods += 1;
                if opts.stop_at_period {
                    traj.termination = Termination::PeriodClosed;
                    return Ok(traj);
                }
                p = start_point.clone();
                continue;
            }
        }
        match step(ex, &p, dir, &traj.param, &budget) {
            Step::Budget(end, s) => {
                push(&mut traj, p, end, carrier, dir, s);
                return Ok(traj);
            }
            Step::Full(ex) => {
                push(&mut traj, p, ex.point.clone(), carrier, dir, ex.s);
                if let Some(v) = ex.vertex {
                    traj.termination = Termination::VertexHit(v);
                    return Ok(traj);
                }
                let f = surf.partner[carrier][ex.edge];
                p = cross_edge(surf, carrier, ex.edge, &ex.point);
                carrier = f.polygon;
                skip = Some(f.edge);
            }
        }
    }
}

/// The point of the partner edge identified with `x` on edge `i` of polygon `c`.
fn cross_edge<S: Scalar>(surf: &FlatPolygons<S>, c: usize, i: usize, x: &Vec2<S>) -> Vec2<S> {
    let f = surf.partner[c][i];
    let q = &surf.polygons[f.polygon];
    let q_next = &q[(f.edge + 1) % q.len()];
    q_next + &(x - &surf.polygons[c][i])
}

/// Run the billiard in `P` and the straight-line flow on its unfolding from
/// the lifted start, fold the flow back segment by segment and compare.
pub fn unfolding_commutes(
    p: &RationalPolygon,
    start: &PlanarVec,
    dir: &PlanarVec,
    max_len: f64,
) -> Result<bool, FlowError> {
    let u = unfold(p)?;
    unfolding_commutes_with(&u, start, dir, max_len)
}

pub fn unfolding_commutes_with(
    u: &Unfolding,
    start: &PlanarVec,
    dir: &PlanarVec,
    max_len: f64,
) -> Result<bool, FlowError> {
    let opts = FlowOptions::default();
    let bill = billiard(u.polygon.vertices(), start, dir, max_len, &opts)?;
    let surf = FlatPolygons::from_surface(&u.surface);
    let lifted = u.lift_point(start, 0);
    let flow = linear_flow(&surf, 0, &lifted, dir, max_len, &opts)?;
    if bill.segments.len() != flow.segments.len() || bill.param != flow.param {
        return Ok(false);
    }
    let same_end = match (bill.termination, flow.termination) {
        (Termination::VertexHit(_), Termination::VertexHit(_)) => true,
        (a, b) => a == b,
    };
    if !same_end {
        return Ok(false);
    }
    for (b, f) in bill.segments.iter().zip(&flow.segments) {
        let h = f.carrier;
        let (fs, _) = u.fold_point(h, &f.start)?;
        let (fe, _) = u.fold_point(h, &f.end)?;
        if fs != b.start || fe != b.end || u.fold_direction(h, &f.direction) != b.direction {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Total variation distance between the time distribution of `traj` over an
/// `n × n` grid on each polygon's bounding box and the area distribution of
/// the same cells: half the sum over cells of `|time fraction − area fraction|`.
pub fn discrepancy<S: Scalar>(
    traj: &Trajectory<S>,
    surf: &FlatPolygons<S>,
    n: usize,
) -> Result<f64, FlowError> {
    if n < 2 {
        return Err(FlowError::BadGrid);
    }
    let total_area = surf.area_f64();
    let total_len: f64 = traj.segments.iter().map(|s| s.length_f64()).sum();
    let mut sum = 0.0;
    for (c, poly) in surf.polygons.iter().enumerate() {
        let pts: Vec<Vec2<f64>> = poly.iter().map(|v| v.to_f64()).collect();
        let (x0, x1, y0, y1) = bbox(&pts);
        let (w, h) = ((x1 - x0) / n as f64, (y1 - y0) / n as f64);
        let mut time = vec![0.0; n * n];
        for seg in traj.segments.iter().filter(|s| s.carrier == c) {
            let (a, b) = (seg.start.to_f64(), seg.end.to_f64());
            for (k, t) in time.iter_mut().enumerate() {
                let (i, j) = (k % n, k / n);
                let rect = [
                    x0 + i as f64 * w,
                    x0 + (i + 1) as f64 * w,
                    y0 + j as f64 * h,
                    y0 + (j + 1) as f64 * h,
                ];
                *t += clipped_length(&a, &b, rect);
            }
        }
        for (k, t) in time.iter().enumerate() {
            let (i, j) = (k % n, k / n);
            let rect = [
                x0 + i as f64 * w,
                x0 + (i + 1) as f64 * w,
                y0 + j as f64 * h,
                y0 + (j + 1) as f64 * h,
            ];
            let area = clipped_area(&pts, rect) / total_area;
            let tf = if total_len > 0.0 { t / total_len } else { 0.0 };
            sum += (tf - area).abs();
        }
    }
    Ok((sum / 2.0).clamp(0.0, 1.0))
}

fn bbox(pts: &[Vec2<f64>]) -> (f64, f64, f64, f64) {
    pts.iter().fold(
        (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        ),
        |(a, b, c, d), p| (a.min(p.x), b.max(p.x), c.min(p.y), d.max(p.y)),
    )
}

/// Length of the part of segment `ab` inside `[x0, x1] × [y0, y1]`.
fn clipped_length(a: &Vec2<f64>, b: &Vec2<f64>, [x0, x1, y0, y1]: [f64; 4]) -> f64 {
    let d = b - a;
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for (p, q) in [
        (-d.x, a.x - x0),
        (d.x, x1 - a.x),
        (-d.y, a.y - y0),
        (d.y, y1 - a.y),
    ] {
        if p == 0.0 {
            if q < 0.0 {
                return 0.0;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
        }
    }
    if t1 > t0 {
        (t1 - t0) * d.length_f64()
    } else {
        0.0
    }
}

/// Area of a polygon clipped to a rectangle.
fn clipped_area(pts: &[Vec2<f64>], [x0, x1, y0, y1]: [f64; 4]) -> f64 {
    let mut poly = pts.to_vec();
    // keep the side where `f >= 0` for each rectangle side
    let sides: [Box<dyn Fn(&Vec2<f64>) -> f64>; 4] = [
        Box::new(move |p| p.x - x0),
        Box::new(move |p| x1 - p.x),
        Box::new(move |p| p.y - y0),
        Box::new(move |p| y1 - p.y),
    ];
    for f in &sides {
        if poly.is_empty() {
            return 0.0;
        }
        let mut out = Vec::new();
        for i in 0..poly.len() {
            let (p, q) = (&poly[i], &poly[(i + 1) % poly.len()]);
            let (fp, fq) = (f(p), f(q));
            if fp >= 0.0 {
                out.push(p.clone());
            }
            if (fp >= 0.0) != (fq >= 0.0) {
                let t = fp / (fp - fq);
                out.push(p + &(q - p).scale(&t));
            }
        }
        poly = out;
    }
    if poly.len() < 3 {
        return 0.0;
    }
    geom::signed_area2(&poly) / 2.0
}

#[derive(Debug, Clone, PartialEq)]
pub enum Illumination {
    FoundTrajectory(Trajectory<AlgNum>),
    NotFoundWithinBound,
}

/// Search for a billiard path from `y` to `x` of length at most `max_len`.
///
/// Copies of `P` are developed in the plane by reflecting across sides,
/// breadth-first, keeping those within `max_len` of `y`. Each image `x'` of
/// `x` gives a candidate direction `x' - y`; candidates are tried in order
/// of distance and confirmed by running the billiard, so a reported path
/// never passes through a corner.
pub fn illuminates(
    p: &RationalPolygon,
    x: &PlanarVec,
    y: &PlanarVec,
    max_len: f64,
) -> Result<Illumination, FlowError> {
    let poly = p.vertices();
    for q in [x, y] {
        if geom::locate(q, poly) == Location::Outside {
            return Err(FlowError::StartOutsidePolygon);
        }
    }
    if !(max_len > 0.0 && max_len.is_finite()) {
        return Err(FlowError::BadLength);
    }
    if x == y {
        return Ok(Illumination::FoundTrajectory(Trajectory {
            segments: Vec::new(),
            param: AlgNum::zero(),
            dir_norm2: AlgNum::zero(),
            termination: Termination::LengthBudget,
            periods: 0,
        }));
    }
    let n = poly.len();
    let yf = y.to_f64();
    let far = |verts: &[PlanarVec]| {
        let pts: Vec<Vec2<f64>> = verts.iter().map(|v| v.to_f64()).collect();
        point_polygon_distance(&yf, &pts) > max_len * (1.0 + 1e-9)
    };
    // Each developed copy is an affine map (g, t): v ↦ g·v + t.
    let mut seen: HashSet<String> = HashSet::new();
    let mut queue = VecDeque::new();
    let mut candidates: Vec<(f64, PlanarVec)> = Vec::new();
    let identity = (FieldMatrix::identity(), Vec2::zero());
    seen.insert(map_key(&identity));
    queue.push_back(identity);
    while let Some((g, t)) = queue.pop_front() {
        let image = |v: &PlanarVec| &g.apply(v) + &t;
        let xi = image(x);
        let dist = (&xi - y).length_f64();
        if dist <= max_len * (1.0 + 1e-12) {
            candidates.push((dist, xi));
        }
        let verts: Vec<PlanarVec> = poly.iter().map(&image).collect();
        for k in 0..n {
            let (a, b) = (&verts[k], &verts[(k + 1) % n]);
            let r = FieldMatrix::reflection(&(b - a));
            // reflect across the line through a: v ↦ r(v - a) + a
            let g2 = &r * &g;
            let t2 = &r.apply(&(&t - a)) + a;
            let key = map_key(&(g2.clone(), t2.clone()));
            if seen.contains(&key) {
                continue;
            }
            let next: Vec<PlanarVec> = poly.iter().map(|v| &g2.apply(v) + &t2).collect();
            if far(&next) {
                continue;
            }
            seen.insert(key);
            queue.push_back((g2, t2));
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
    let opts = FlowOptions::default();
    for (_, xi) in candidates {
        let d = &xi - y;
        let traj = billiard_param(poly, y, &d, AlgNum::one(), false, &opts)?;
        if traj.termination == Termination::LengthBudget
            && traj.param == AlgNum::one()
            && traj.end() == Some(x)
        {
            return Ok(Illumination::FoundTrajectory(traj));
        }
    }
    Ok(Illumination::NotFoundWithinBound)
}

fn map_key((g, t): &(FieldMatrix, PlanarVec)) -> String {
    format!("{} {} {} {} {} {}", g.a, g.b, g.c, g.d, t.x, t.y)
}

fn point_polygon_distance(p: &Vec2<f64>, poly: &[Vec2<f64>]) -> f64 {
    if geom::locate(p, poly) != Location::Outside {
        return 0.0;
    }
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (a, b) = (&poly[i], &poly[(i + 1) % n]);
            let ab = b - a;
            let t = ((p - a).dot(&ab) / ab.norm2()).clamp(0.0, 1.0);
            (p - &(a + &ab.scale(&t))).length_f64()
        })
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn q(a: i64, b: i64) -> AlgNum {
        AlgNum::from_ratio(a, b)
    }

    fn v(x: AlgNum, y: AlgNum) -> PlanarVec {
        Vec2::new(x, y)
    }

    fn half() -> PlanarVec {
        v(q(1, 2), q(1, 2))
    }

    #[test]
    fn centre_to_corner() {
        let sq = corpus::unit_square_polygon();
        let t = billiard(
            sq.vertices(),
            &half(),
            &Vec2::from_i64(1, 1),
            10.0,
            &FlowOptions::default(),
        )
        .unwrap();
        assert_eq!(t.termination, Termination::VertexHit(2));
        assert_eq!(t.length2(), q(1, 2));
    }

    #[test]
    fn rational_slope_closes() {
        let sq = corpus::unit_square_polygon();
        let t = billiard(
            sq.vertices(),
            &half(),
            &Vec2::from_i64(1, 2),
            100.0,
            &FlowOptions::default(),
        )
        .unwrap();
        assert_eq!(t.termination, Termination::PeriodClosed);
        assert_eq!(t.length2(), AlgNum::from_int(20));
        let first = &t.segments[0].direction;
        assert!(t
            .segments
            .iter()
            .all(|s| s.direction.norm2() == first.norm2()));
    }

    #[test]
    fn start_outside_and_at_corner() {
        let sq = corpus::unit_square_polygon();
        let o = FlowOptions::default();
        let d = Vec2::from_i64(1, 0);
        assert_eq!(
            billiard(sq.vertices(), &Vec2::from_i64(2, 2), &d, 1.0, &o),
            Err(FlowError::StartOutsidePolygon)
        );
        assert_eq!(
            billiard(sq.vertices(), &Vec2::from_i64(0, 0), &d, 1.0, &o),
            Err(FlowError::StartOutsidePolygon)
        );
    }

    #[test]
    fn reversal_retraces() {
        let p = corpus::triangle_pi8();
        let start = v(q(1, 2), q(1, 10));
        let d = v(q(1, 3), AlgNum::one());
        let o = FlowOptions::default();
        let fwd = billiard_param(p.vertices(), &start, &d, AlgNum::from_int(7), false, &o).unwrap();
        assert_eq!(fwd.termination, Termination::LengthBudget);
        let last = fwd.segments.last().unwrap();
        let back = billiard_param(
            p.vertices(),
            &last.end,
            &-&last.direction,
            fwd.param.clone(),
            false,
            &o,
        )
        .unwrap();
        assert_eq!(back.end(), Some(&start));
        assert_eq!(back.segments.len(), fwd.segments.len());
    }

    #[test]
    fn torus_flows() {
        let surf = FlatPolygons::from_surface(&corpus::square_torus());
        let o = FlowOptions::default();
        let start = v(q(1, 3), q(1, 7));
        let t = linear_flow(&surf, 0, &start, &Vec2::from_i64(1, 0), 10.0, &o).unwrap();
        assert_eq!(t.termination, Termination::PeriodClosed);
        assert_eq!(t.length2(), AlgNum::one());
        let t = linear_flow(&surf, 0, &start, &Vec2::from_i64(3, -2), 100.0, &o).unwrap();
        assert_eq!(t.termination, Termination::PeriodClosed);
        assert_eq!(t.length2(), AlgNum::from_int(13));
        let twice = FlowOptions {
            stop_at_period: false,
            ..o.clone()
        };
        let p = 13f64.sqrt();
        let t2 = linear_flow(
            &surf,
            0,
            &start,
            &Vec2::from_i64(3, -2),
            2.0 * p + 1e-9,
            &twice,
        )
        .unwrap();
        assert_eq!(t2.periods, 2);
    }

    #[test]
    fn octagon_periodic_line() {
        let s = corpus::regular_octagon();
        let surf = FlatPolygons::from_surface(&s);
        let start = v(q(1, 2), q(1, 3));
        let t = linear_flow(
            &surf,
            0,
            &start,
            &Vec2::from_i64(1, 0),
            100.0,
            &FlowOptions::default(),
        )
        .unwrap();
        assert_eq!(t.termination, Termination::PeriodClosed);
    }

    #[test]
    fn float_flow_matches_exact() {
        let surf = FlatPolygons::from_surface(&corpus::square_torus());
        let fsurf = surf.to_f64();
        let o = FlowOptions::default();
        let t = linear_flow(
            &fsurf,
            0,
            &Vec2::new(0.25, 0.1),
            &Vec2::new(2.0, 5.0),
            100.0,
            &o,
        )
        .unwrap();
        assert_eq!(t.termination, Termination::PeriodClosed);
        assert!((t.length() - 29f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn commutation_square_and_triangle() {
        for p in [corpus::unit_square_polygon(), corpus::triangle_pi8()] {
            let start = v(q(2, 3), q(1, 9));
            for d in [(1, 2), (3, 1), (-2, 5), (1, 1)] {
                let d = Vec2::from_i64(d.0, d.1);
                assert!(unfolding_commutes(&p, &start, &d, 6.0).unwrap());
            }
        }
    }

    #[test]
    fn horizontal_discrepancy() {
        let surf = FlatPolygons::from_surface(&corpus::square_torus());
        let t = linear_flow(
            &surf,
            0,
            &v(q(1, 3), q(1, 7)),
            &Vec2::from_i64(1, 0),
            10.0,
            &FlowOptions::default(),
        )
        .unwrap();
        let d = discrepancy(&t, &surf, 4).unwrap();
        assert!((d - 0.75).abs() < 1e-12);
        assert_eq!(discrepancy(&t, &surf, 1), Err(FlowError::BadGrid));
    }

    #[test]
    fn illumination_examples() {
        let sq = corpus::unit_square_polygon();
        match illuminates(&sq, &half(), &half(), 0.1).unwrap() {
            Illumination::FoundTrajectory(t) => assert!(t.segments.is_empty()),
            other => panic!("{other:?}"),
        }
        let x = v(q(1, 4), q(1, 4));
        let y = v(q(3, 4), q(3, 4));
        match illuminates(&sq, &x, &y, 2.0).unwrap() {
            Illumination::FoundTrajectory(t) => assert_eq!(t.segments.len(), 1),
            other => panic!("{other:?}"),
        }
        // the reflex corner blocks the straight path in the L-shape
        let l = corpus::l_shape_polygon();
        let x = v(q(1, 2), q(3, 2));
        let y = v(q(3, 2), q(1, 2));
        match illuminates(&l, &x, &y, 10.0).unwrap() {
            Illumination::FoundTrajectory(t) => {
                assert!(t.segments.len() >= 2);
                assert_eq!(t.end(), Some(&x));
            }
            other => panic!("{other:?}"),
        }
    }
}
