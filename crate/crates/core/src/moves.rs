//! Cut-and-paste moves, triangulations, Delaunay flips and a decision
//! procedure for equality of translation surfaces.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::algnum::AlgNum;
use crate::geom::{self, Location};
use crate::scalar::{angle_cmp, PlanarVec, Scalar, Vec2};
use crate::surface::{Corner, EdgeRef, Polygon, SurfaceError, TranslationSurface};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MovesError {
    #[error("polygon {0} does not exist")]
    NoSuchPolygon(usize),
    #[error("cut endpoints must lie on the polygon boundary")]
    EndpointsNotOnBoundary,
    #[error("cut segment does not run through the polygon interior")]
    SegmentNotInterior,
    #[error("edge {0} is glued to its own polygon")]
    SameFace(EdgeRef),
    #[error("gluing along {0} gives a non-simple polygon")]
    NonSimpleResult(EdgeRef),
    #[error("could not remove a regular vertex by flips")]
    MarkedPointRemoval,
    #[error("periods of a genus one surface do not form a lattice")]
    NotALattice,
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// A straight cut across one polygon between two boundary points.
#[derive(Debug, Clone, PartialEq)]
pub struct CutSpec {
    pub polygon: usize,
    pub start: PlanarVec,
    pub end: PlanarVec,
}

/// Editable copy of a surface's polygons and pairing.
struct Draft {
    polys: Vec<Polygon>,
    partner: Vec<Vec<EdgeRef>>,
    name: Option<String>,
}

impl Draft {
    fn new(s: &TranslationSurface) -> Draft {
        let partner = s
            .polygons()
            .iter()
            .enumerate()
            .map(|(p, poly)| {
                (0..poly.len())
                    .map(|i| s.partner(EdgeRef::new(p, i)))
                    .collect()
            })
            .collect();
        Draft {
            polys: s.polygons().to_vec(),
            partner,
            name: s.name.clone(),
        }
    }

    fn finish(self) -> Result<TranslationSurface, MovesError> {
        let mut pairs = Vec::new();
        for (p, row) in self.partner.iter().enumerate() {
            for (i, f) in row.iter().enumerate() {
                let e = EdgeRef::new(p, i);
                if e < *f {
                    pairs.push((e, *f));
                }
            }
        }
        let mut s = TranslationSurface::new(self.polys, &pairs)?;
        s.name = self.name;
        Ok(s)
    }

    /// Rewrite every edge reference through `map`.
    fn remap(&mut self, map: impl Fn(EdgeRef) -> EdgeRef) {
        for row in &mut self.partner {
            for f in row.iter_mut() {
                *f = map(*f);
            }
        }
    }

    /// Insert a vertex into polygon `p` right after vertex `after`.
    fn insert_vertex(&mut self, p: usize, after: usize, pt: PlanarVec) {
        self.remap(|e| {
            if e.polygon == p && e.edge > after {
                EdgeRef::new(p, e.edge + 1)
            } else {
                e
            }
        });
        let mut verts = self.polys[p].vertices().to_vec();
        verts.insert(after + 1, pt);
        self.polys[p] = Polygon::new(self.polys[p].label.clone(), verts);
        let placeholder = EdgeRef::new(usize::MAX, usize::MAX);
        self.partner[p].insert(after + 1, placeholder);
    }

    /// Split edge `e` at a point of its relative interior, together with its partner.
    fn split_edge(&mut self, e: EdgeRef, pt: PlanarVec) {
        let f = self.partner[e.polygon][e.edge];
        let start_e = self.polys[e.polygon].vertex(e.edge).clone();
        let end_f = self.polys[f.polygon].vertex(f.edge + 1).clone();
        let pt_f = &end_f + &(&pt - &start_e);
        self.insert_vertex(e.polygon, e.edge, pt);
        let f = if f.polygon == e.polygon && f.edge > e.edge {
            EdgeRef::new(f.polygon, f.edge + 1)
        } else {
            f
        };
        self.insert_vertex(f.polygon, f.edge, pt_f);
        let e = if e.polygon == f.polygon && e.edge > f.edge {
            EdgeRef::new(e.polygon, e.edge + 1)
        } else {
            e
        };
        let e2 = EdgeRef::new(e.polygon, e.edge + 1);
        let f2 = EdgeRef::new(f.polygon, f.edge + 1);
        self.partner[e.polygon][e.edge] = f2;
        self.partner[f2.polygon][f2.edge] = e;
        self.partner[e2.polygon][e2.edge] = f;
        self.partner[f.polygon][f.edge] = e2;
    }

    fn fresh_label(&self, base: &str) -> String {
        let mut label = format!("{base}'");
        while self.polys.iter().any(|p| p.label == label) {
            label.push('\'');
        }
        label
    }
}

fn boundary_vertex(draft: &mut Draft, p: usize, pt: &PlanarVec) -> Result<(), MovesError> {
    match geom::locate(pt, draft.polys[p].vertices()) {
        Location::Vertex(_) => Ok(()),
        Location::Edge(i) => {
            draft.split_edge(EdgeRef::new(p, i), pt.clone());
            Ok(())
        }
        _ => Err(MovesError::EndpointsNotOnBoundary),
    }
}

/// Cut one polygon in two along a segment between boundary points. Endpoints
/// inside an edge subdivide that edge and its partner.
pub fn cut(s: &TranslationSurface, spec: &CutSpec) -> Result<TranslationSurface, MovesError> {
    let p = spec.polygon;
    if p >= s.polygons().len() {
        return Err(MovesError::NoSuchPolygon(p));
    }
    let level = s.level();
    let (start, end) = (spec.start.lift(level), spec.end.lift(level));
    for pt in [&start, &end] {
        if matches!(
            geom::locate(pt, s.polygon(p).vertices()),
            Location::Inside | Location::Outside
        ) {
            return Err(MovesError::EndpointsNotOnBoundary);
        }
    }
    if start == end {
        return Err(MovesError::SegmentNotInterior);
    }
    let mut draft = Draft::new(s);
    boundary_vertex(&mut draft, p, &start)?;
    boundary_vertex(&mut draft, p, &end)?;
    let verts = draft.polys[p].vertices().to_vec();
    let n = verts.len();
    let find = |pt: &PlanarVec| {
        verts
            .iter()
            .position(|v| v == pt)
            .expect("endpoint is a vertex")
    };
    let (a, b) = (find(&start), find(&end));
    if !geom::is_diagonal(&verts, a, b) {
        return Err(MovesError::SegmentNotInterior);
    }
    let len1 = (b + n - a) % n + 1;
    let len2 = (a + n - b) % n + 1;
    let first: Vec<PlanarVec> = (0..len1).map(|k| verts[(a + k) % n].clone()).collect();
    let second: Vec<PlanarVec> = (0..len2).map(|k| verts[(b + k) % n].clone()).collect();
    let q = draft.polys.len();
    let label = draft.polys[p].label.clone();
    let label2 = draft.fresh_label(&label);
    draft.remap(|e| {
        if e.polygon != p {
            return e;
        }
        let from_a = (e.edge + n - a) % n;
        if from_a < len1 - 1 {
            EdgeRef::new(p, from_a)
        } else {
            EdgeRef::new(q, (e.edge + n - b) % n)
        }
    });
    let old_row = std::mem::take(&mut draft.partner[p]);
    let mut row1 = vec![EdgeRef::new(q, len2 - 1); len1];
    let mut row2 = vec![EdgeRef::new(p, len1 - 1); len2];
    for (k, f) in old_row.into_iter().enumerate() {
        let from_a = (k + n - a) % n;
        if from_a < len1 - 1 {
            row1[from_a] = f;
        } else {
            row2[(k + n - b) % n] = f;
        }
    }
    draft.partner[p] = row1;
    draft.partner.push(row2);
    draft.polys[p] = Polygon::new(label, first);
    draft.polys.push(Polygon::new(label2, second));
    draft.finish()
}

/// Merge the two polygons on either side of edge `e` into one.
pub fn glue(s: &TranslationSurface, e: EdgeRef) -> Result<TranslationSurface, MovesError> {
    if e.polygon >= s.polygons().len() || e.edge >= s.polygon(e.polygon).len() {
        return Err(SurfaceError::InvalidEdgeRef(e).into());
    }
    let f = s.partner(e);
    if f.polygon == e.polygon {
        return Err(MovesError::SameFace(e));
    }
    let (p, i, q, j) = (e.polygon, e.edge, f.polygon, f.edge);
    let pp = s.polygon(p);
    let qq = s.polygon(q);
    let (n, m) = (pp.len(), qq.len());
    let shift = pp.vertex(i) - qq.vertex(j + 1);
    let mut verts: Vec<PlanarVec> = (0..n).map(|k| pp.vertex(i + 1 + k).clone()).collect();
    verts.extend((0..m - 2).map(|k| qq.vertex(j + 2 + k) + &shift));
    if !geom::is_simple(&verts) {
        return Err(MovesError::NonSimpleResult(e));
    }
    let merged_index = if p > q { p - 1 } else { p };
    let map = |r: EdgeRef| -> EdgeRef {
        if r.polygon == p {
            EdgeRef::new(merged_index, (r.edge + n - i - 1) % n)
        } else if r.polygon == q {
            EdgeRef::new(merged_index, n - 1 + (r.edge + m - j - 1) % m)
        } else if r.polygon > q {
            EdgeRef::new(r.polygon - 1, r.edge)
        } else {
            r
        }
    };
    let mut polys = Vec::new();
    let mut pairs = Vec::new();
    for (k, poly) in s.polygons().iter().enumerate() {
        if k == p {
            polys.push(Polygon::new(poly.label.clone(), verts.clone()));
        } else if k != q {
            polys.push(poly.clone());
        }
    }
    for (a, b) in s.pairs() {
        if a == e || a == f {
            continue;
        }
        pairs.push((map(a), map(b)));
    }
    let mut out = TranslationSurface::new(polys, &pairs)?;
    out.name = s.name.clone();
    Ok(out)
}

/// A triangulated surface: per triangle its three edge vectors, the side
/// glued to each of its sides, and the vertex class at each corner.
/// Side `k` runs from corner `k` to corner `k + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh<S: Scalar = AlgNum> {
    edges: Vec<[Vec2<S>; 3]>,
    adj: Vec<[(usize, usize); 3]>,
    class: Vec<[usize; 3]>,
    angles: Vec<u32>,
}

impl<S: Scalar> Mesh<S> {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edge(&self, t: usize, k: usize) -> &Vec2<S> {
        &self.edges[t][k % 3]
    }

    pub fn edges_of(&self, t: usize) -> &[Vec2<S>; 3] {
        &self.edges[t]
    }

    pub fn neighbor(&self, t: usize, k: usize) -> (usize, usize) {
        self.adj[t][k % 3]
    }

    /// Vertex class at corner `k` of triangle `t`.
    pub fn class(&self, t: usize, k: usize) -> usize {
        self.class[t][k % 3]
    }

    /// Total angle of a vertex class divided by 2π.
    pub fn class_angle(&self, c: usize) -> u32 {
        self.angles[c]
    }

    pub fn class_count(&self) -> usize {
        self.angles.len()
    }

    /// Position of corner `k` relative to corner 0.
    pub fn corner_offset(&self, t: usize, k: usize) -> Vec2<S> {
        (0..k % 3).fold(Vec2::zero(), |acc, i| acc + self.edges[t][i].clone())
    }

    /// Corners at a vertex class in counterclockwise order.
    pub fn corners_ccw(&self, c: usize) -> Vec<(usize, usize)> {
        let start = (0..self.len())
            .flat_map(|t| (0..3).map(move |k| (t, k)))
            .find(|&(t, k)| self.class[t][k] == c);
        let Some(start) = start else {
            return Vec::new();
        };
        let mut out = vec![start];
        let mut cur = start;
        loop {
            let next = self.neighbor(cur.0, cur.1 + 2);
            if next == start {
                break;
            }
            out.push(next);
            cur = next;
        }
        out
    }

    /// Whether flipping side `k` of `t` yields two positively oriented triangles.
    pub fn flippable(&self, t: usize, k: usize) -> bool {
        let (u, j) = self.neighbor(t, k);
        if u == t {
            return false;
        }
        let b = self.edge(t, k + 1);
        let c = self.edge(t, k + 2);
        let d = self.edge(u, j + 1);
        let f = self.edge(u, j + 2);
        f.cross(b).signum() > 0 && c.cross(d).signum() > 0
    }

    /// Sign of the incircle test for side `k` of `t`: positive when the far
    /// vertex of the neighbouring triangle lies inside the circumcircle of `t`.
    pub fn incircle(&self, t: usize, k: usize) -> i8 {
        let (u, j) = self.neighbor(t, k);
        let a = self.edge(t, k);
        let b = self.edge(t, k + 1);
        let d = self.edge(u, j + 1);
        let origin = Vec2::zero();
        let c = a + b;
        geom::incircle(&origin, a, &c, d)
    }

    /// Replace side `k` of `t` by the other diagonal of the quadrilateral
    /// formed with its neighbour. Returns the slots of the two new triangles,
    /// which are `t` and its neighbour; side 2 of each is the new diagonal.
    fn flip(&mut self, t: usize, k: usize) {
        let (u, j) = self.neighbor(t, k);
        let b = self.edge(t, k + 1).clone();
        let c = self.edge(t, k + 2).clone();
        let d = self.edge(u, j + 1).clone();
        let f = self.edge(u, j + 2).clone();
        let cd = &c + &d;
        let outer_old = [
            (u, (j + 2) % 3),
            (t, (k + 1) % 3),
            (t, (k + 2) % 3),
            (u, (j + 1) % 3),
        ];
        let outer_new = [(t, 0), (t, 1), (u, 0), (u, 1)];
        let remap = |x: (usize, usize)| -> (usize, usize) {
            outer_old
                .iter()
                .position(|&o| o == x)
                .map(|i| outer_new[i])
                .unwrap_or(x)
        };
        let partners: Vec<(usize, usize)> = outer_old
            .iter()
            .map(|&(a, s)| remap(self.adj[a][s]))
            .collect();
        let (ca, cb, cc, cd_) = (
            self.class[t][k % 3],
            self.class[t][(k + 1) % 3],
            self.class[t][(k + 2) % 3],
            self.class[u][(j + 2) % 3],
        );
        self.edges[t] = [f, b, cd.clone()];
        self.edges[u] = [c, d, -cd];
        self.class[t] = [cd_, cb, cc];
        self.class[u] = [cc, ca, cd_];
        self.adj[t][2] = (u, 2);
        self.adj[u][2] = (t, 2);
        for (slot, partner) in outer_new.iter().zip(partners) {
            self.adj[slot.0][slot.1] = partner;
            self.adj[partner.0][partner.1] = *slot;
        }
    }

    /// The same combinatorics with every edge vector replaced by `f(edge)`.
    /// `f` must be linear with positive determinant.
    pub fn map<T: Scalar>(&self, f: impl Fn(&Vec2<S>) -> Vec2<T>) -> Mesh<T> {
        Mesh {
            edges: self
                .edges
                .iter()
                .map(|e| [f(&e[0]), f(&e[1]), f(&e[2])])
                .collect(),
            adj: self.adj.clone(),
            class: self.class.clone(),
            angles: self.angles.clone(),
        }
    }

    /// Flip non-Delaunay sides until none remain or `max_flips` is reached.
    /// Returns the number of flips. With float scalars a side is flipped only
    /// when the flip is also strictly valid, which keeps the loop finite on
    /// co-circular configurations up to rounding; the cap covers the rest.
    pub fn make_delaunay(&mut self, max_flips: usize) -> usize {
        let mut stack: Vec<(usize, usize)> = (0..self.len())
            .flat_map(|t| (0..3).map(move |k| (t, k)))
            .collect();
        let mut flips = 0;
        while let Some((t, k)) = stack.pop() {
            if flips >= max_flips {
                break;
            }
            if self.incircle(t, k) > 0 && (S::EXACT || self.flippable(t, k)) {
                let (u, _) = self.neighbor(t, k);
                self.flip(t, k);
                flips += 1;
                for s in 0..3 {
                    stack.push((t, s));
                    stack.push((u, s));
                }
            }
        }
        flips
    }

    /// Drop the listed triangles and renumber the rest.
    fn compact(&mut self, dead: &[usize]) -> Vec<Option<usize>> {
        let mut map = vec![None; self.len()];
        let mut next = 0;
        for (t, slot) in map.iter_mut().enumerate() {
            if !dead.contains(&t) {
                *slot = Some(next);
                next += 1;
            }
        }
        retain_live(&mut self.edges, &map);
        retain_live(&mut self.adj, &map);
        retain_live(&mut self.class, &map);
        for row in &mut self.adj {
            for s in row.iter_mut() {
                s.0 = map[s.0].expect("neighbour of a live triangle is live");
            }
        }
        map
    }
}

fn retain_live<T>(v: &mut Vec<T>, map: &[Option<usize>]) {
    let mut i = 0;
    v.retain(|_| {
        let k = map[i].is_some();
        i += 1;
        k
    });
}

/// A triangulation of a surface together with where each triangle sits in
/// the plane and which original edge each side came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Triangulation {
    pub mesh: Mesh,
    /// Position of corner 0 of each triangle, for drawing.
    pub anchors: Vec<PlanarVec>,
    /// Original polygon edge carried by each side; `None` for diagonals.
    pub origin: Vec<[Option<EdgeRef>; 3]>,
    /// Flips performed to reach this triangulation.
    pub flips: usize,
}

/// Ear-clip every polygon. An `n`-gon yields `n - 2` triangles.
pub fn triangulate(s: &TranslationSurface) -> Triangulation {
    let mut edges = Vec::new();
    let mut class = Vec::new();
    let mut anchors = Vec::new();
    let mut origin = Vec::new();
    let mut sides: HashMap<(usize, usize, usize), (usize, usize)> = HashMap::new();
    let mut tri_verts = Vec::new();
    for (p, poly) in s.polygons().iter().enumerate() {
        let n = poly.len();
        for tri in geom::ear_clip(poly.vertices()) {
            let t = edges.len();
            let v: Vec<&PlanarVec> = tri.iter().map(|&i| poly.vertex(i)).collect();
            edges.push([v[1] - v[0], v[2] - v[1], v[0] - v[2]]);
            class.push(tri.map(|i| {
                s.vertex_class(Corner {
                    polygon: p,
                    vertex: i,
                })
            }));
            anchors.push(v[0].clone());
            let mut orig = [None; 3];
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                sides.insert((p, a, b), (t, k));
                if b == (a + 1) % n {
                    orig[k] = Some(EdgeRef::new(p, a));
                }
            }
            origin.push(orig);
            tri_verts.push((p, tri));
        }
    }
    let adj = tri_verts
        .iter()
        .map(|&(p, tri)| {
            let n = s.polygon(p).len();
            std::array::from_fn(|k| {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                if b == (a + 1) % n {
                    let f = s.partner(EdgeRef::new(p, a));
                    let m = s.polygon(f.polygon).len();
                    sides[&(f.polygon, f.edge, (f.edge + 1) % m)]
                } else {
                    sides[&(p, b, a)]
                }
            })
        })
        .collect();
    let angles = s.cone_points().iter().map(|c| c.angle_multiple).collect();
    Triangulation {
        mesh: Mesh {
            edges,
            adj,
            class,
            angles,
        },
        anchors,
        origin,
        flips: 0,
    }
}

impl Triangulation {
    fn flip(&mut self, t: usize, k: usize) {
        let (u, j) = self.mesh.neighbor(t, k);
        let base = &self.anchors[t];
        let a_pos = base + &self.mesh.corner_offset(t, k);
        let c_pos = base + &self.mesh.corner_offset(t, k + 2);
        let d_pos = &a_pos + self.mesh.edge(u, j + 1);
        let o = |x: (usize, usize)| -> Option<EdgeRef> { self.origin[x.0][x.1 % 3] };
        let ot = [o((u, j + 2)), o((t, k + 1)), None];
        let ou = [o((t, k + 2)), o((u, j + 1)), None];
        self.mesh.flip(t, k);
        self.anchors[t] = d_pos;
        self.anchors[u] = c_pos;
        self.origin[t] = ot;
        self.origin[u] = ou;
        self.flips += 1;
    }

    /// Flip edges failing the Delaunay condition until none remain.
    pub fn make_delaunay(&mut self) {
        let mut stack: Vec<(usize, usize)> = (0..self.mesh.len())
            .flat_map(|t| (0..3).map(move |k| (t, k)))
            .collect();
        while let Some((t, k)) = stack.pop() {
            if self.mesh.incircle(t, k) > 0 {
                let (u, _) = self.mesh.neighbor(t, k);
                self.flip(t, k);
                for s in 0..3 {
                    stack.push((t, s));
                    stack.push((u, s));
                }
            }
        }
    }

    pub fn is_delaunay(&self) -> bool {
        (0..self.mesh.len()).all(|t| (0..3).all(|k| self.mesh.incircle(t, k) <= 0))
    }

    /// Twice the signed area of triangle `t`.
    fn area2(&self, t: usize) -> AlgNum {
        self.mesh.edge(t, 0).cross(self.mesh.edge(t, 1))
    }

    /// Translate every corner in class `v` by `delta`.
    fn move_vertex(&mut self, v: usize, delta: &PlanarVec) {
        for t in 0..self.mesh.len() {
            for k in 0..3 {
                if self.mesh.class[t][k] != v {
                    continue;
                }
                self.mesh.edges[t][k] = &self.mesh.edges[t][k] - delta;
                let prev = (k + 2) % 3;
                self.mesh.edges[t][prev] = &self.mesh.edges[t][prev] + delta;
                if k == 0 {
                    self.anchors[t] = &self.anchors[t] + delta;
                }
                self.origin[t][k] = None;
                self.origin[t][prev] = None;
            }
        }
    }

    /// Remove a vertex class of total angle 2π. The vertex slides along an
    /// edge to a neighbouring vertex; triangles that degenerate on the way
    /// are repaired by flipping the side opposite their straight angle, and
    /// at the end the two triangles along the edge collapse.
    fn remove_regular_vertex(&mut self, v: usize) -> Result<(), MovesError> {
        let corners = self.mesh.corners_ccw(v);
        if corners.is_empty() {
            return Ok(());
        }
        let target = corners
            .iter()
            .filter(|&&(t, i)| self.mesh.class(t, i + 1) != v)
            .min_by(|&&(t, i), &&(u, j)| {
                self.mesh
                    .edge(t, i)
                    .norm2()
                    .cmp_real(&self.mesh.edge(u, j).norm2())
            })
            .copied()
            .ok_or(MovesError::MarkedPointRemoval)?;
        let w = self.mesh.class(target.0, target.1 + 1);
        let mut remaining = self.mesh.edge(target.0, target.1).clone();
        let mut budget = 64 * self.mesh.len() + 256;
        loop {
            // Earliest time in (0, 1) at which a triangle at v degenerates
            // while v moves by `remaining`.
            let mut event: Option<AlgNum> = None;
            for t in 0..self.mesh.len() {
                let moving: [bool; 3] = std::array::from_fn(|k| self.mesh.class[t][k] == v);
                if !moving.iter().any(|&m| m) || moving.iter().all(|&m| m) {
                    continue;
                }
                let p: [PlanarVec; 3] = std::array::from_fn(|k| self.mesh.corner_offset(t, k));
                let moved: [PlanarVec; 3] = std::array::from_fn(|k| {
                    if moving[k] {
                        &p[k] + &remaining
                    } else {
                        p[k].clone()
                    }
                });
                let a0 = self.area2(t);
                let a1 = (&moved[1] - &moved[0]).cross(&(&moved[2] - &moved[0])) - a0.clone();
                // area(λ) = a0 + λ a1 since at most two corners move together
                if a1.sign_real() >= 0 {
                    continue;
                }
                let lambda = -(a0 / a1);
                if lambda.cmp_real(&AlgNum::one()) != Ordering::Less {
                    continue;
                }
                if event
                    .as_ref()
                    .is_none_or(|e| lambda.cmp_real(e) == Ordering::Less)
                {
                    event = Some(lambda);
                }
            }
            let Some(lambda) = event else { break };
            if budget == 0 {
                return Err(MovesError::MarkedPointRemoval);
            }
            budget -= 1;
            let step = remaining.scale(&lambda);
            self.move_vertex(v, &step);
            remaining = &remaining - &step;
            self.repair_degenerate()?;
        }
        self.move_vertex(v, &remaining);
        self.collapse(v, w)
    }

    /// Flip away zero-area triangles by flipping the side opposite the
    /// straight angle.
    fn repair_degenerate(&mut self) -> Result<(), MovesError> {
        let mut guard = 4 * self.mesh.len() + 16;
        while let Some(t) = (0..self.mesh.len()).find(|&t| self.area2(t).sign_real() <= 0) {
            if guard == 0 {
                return Err(MovesError::MarkedPointRemoval);
            }
            guard -= 1;
            let middle = (0..3)
                .find(|&k| {
                    let out = self.mesh.edge(t, k);
                    let back = self.mesh.edge(t, k + 2);
                    // corner k has straight angle when its two sides point the same way
                    out.dot(back).sign_real() > 0
                })
                .ok_or(MovesError::MarkedPointRemoval)?;
            let side = (middle + 1) % 3;
            if !self.mesh.flippable(t, side) {
                return Err(MovesError::MarkedPointRemoval);
            }
            self.flip(t, side);
        }
        Ok(())
    }

    /// After `v` has reached `w`: drop the triangles with a zero-length side,
    /// reglue their remaining sides and merge class `v` into `w`.
    fn collapse(&mut self, v: usize, w: usize) -> Result<(), MovesError> {
        let dead: Vec<usize> = (0..self.mesh.len())
            .filter(|&t| (0..3).any(|k| self.mesh.edge(t, k).is_zero()))
            .collect();
        if dead.len() != 2 {
            return Err(MovesError::MarkedPointRemoval);
        }
        // In a dead triangle the two nonzero sides are the same segment;
        // each is the twin of the other.
        let twin = |t: usize, k: usize| -> (usize, usize) {
            let z = (0..3)
                .find(|&s| self.mesh.edge(t, s).is_zero())
                .expect("zero side");
            let other = (0..3).find(|&s| s != z && s != k).expect("third side");
            (t, other)
        };
        let mut updates = Vec::new();
        for &t in &dead {
            for k in 0..3 {
                if self.mesh.edge(t, k).is_zero() {
                    continue;
                }
                let mut cur = (t, k);
                let mut hops = 0;
                let live = loop {
                    let x = twin(cur.0, cur.1);
                    let p = self.mesh.neighbor(x.0, x.1);
                    if !dead.contains(&p.0) {
                        break Some(p);
                    }
                    cur = p;
                    hops += 1;
                    if hops > 8 {
                        break None;
                    }
                };
                let outer = self.mesh.neighbor(t, k);
                if dead.contains(&outer.0) {
                    continue;
                }
                match live {
                    Some(p) => updates.push((outer, p)),
                    None => return Err(MovesError::MarkedPointRemoval),
                }
            }
        }
        for (a, b) in updates {
            self.mesh.adj[a.0][a.1] = b;
            self.mesh.adj[b.0][b.1] = a;
        }
        for row in &mut self.mesh.class {
            for c in row.iter_mut() {
                if *c == v {
                    *c = w;
                }
            }
        }
        let map = self.mesh.compact(&dead);
        retain_live(&mut self.anchors, &map);
        retain_live(&mut self.origin, &map);
        Ok(())
    }

    /// Surface whose polygons are the triangles, placed at their anchors.
    pub fn to_surface(&self) -> TranslationSurface {
        let polys = (0..self.mesh.len())
            .map(|t| {
                let a = self.anchors[t].clone();
                let b = &a + self.mesh.edge(t, 0);
                let c = &b + self.mesh.edge(t, 1);
                Polygon::new(format!("t{t}"), vec![a, b, c])
            })
            .collect();
        let mut pairs = Vec::new();
        for t in 0..self.mesh.len() {
            for k in 0..3 {
                let (u, j) = self.mesh.neighbor(t, k);
                if (t, k) < (u, j) {
                    pairs.push((EdgeRef::new(t, k), EdgeRef::new(u, j)));
                }
            }
        }
        TranslationSurface::new(polys, &pairs).expect("triangulation of a valid surface")
    }
}

/// Delaunay triangulation reached from [`triangulate`] by edge flips.
pub fn delaunay(s: &TranslationSurface) -> Triangulation {
    let mut tri = triangulate(s);
    tri.make_delaunay();
    tri
}

/// A cell of the Delaunay decomposition: a convex polygon inscribed in an
/// empty circle, given by its edge vectors counterclockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub edges: Vec<PlanarVec>,
    /// For each side, the (cell, side) it is glued to.
    pub glue: Vec<(usize, usize)>,
    /// Position of the first vertex, for drawing.
    pub anchor: PlanarVec,
}

/// Merge triangles across co-circular edges of a Delaunay triangulation.
pub fn delaunay_cells(tri: &Triangulation) -> Vec<Cell> {
    let mesh = &tri.mesh;
    let nt = mesh.len();
    let interior = |t: usize, k: usize| mesh.incircle(t, k) == 0;
    let mut label: Vec<[Option<(usize, usize)>; 3]> = vec![[None; 3]; nt];
    let mut sides_of: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut anchors = Vec::new();
    for t in 0..nt {
        for k in 0..3 {
            if interior(t, k) || label[t][k].is_some() {
                continue;
            }
            let id = sides_of.len();
            let mut sides = Vec::new();
            let mut cur = (t, k);
            let mut pos = tri.anchors[t].clone() + mesh.corner_offset(t, k);
            anchors.push(pos.clone());
            loop {
                label[cur.0][cur.1] = Some((id, sides.len()));
                sides.push(cur);
                pos = pos + mesh.edge(cur.0, cur.1).clone();
                let mut next = (cur.0, (cur.1 + 1) % 3);
                while interior(next.0, next.1) {
                    let (u, j) = mesh.neighbor(next.0, next.1);
                    next = (u, (j + 1) % 3);
                }
                if next == (t, k) {
                    break;
                }
                cur = next;
            }
            sides_of.push(sides);
        }
    }
    sides_of
        .iter()
        .zip(anchors)
        .map(|(sides, anchor)| Cell {
            edges: sides
                .iter()
                .map(|&(t, k)| mesh.edge(t, k).clone())
                .collect(),
            glue: sides
                .iter()
                .map(|&(t, k)| {
                    let (u, j) = mesh.neighbor(t, k);
                    label[u][j].expect("boundary side glued to boundary side")
                })
                .collect(),
            anchor,
        })
        .collect()
}

/// Presentation-independent description of a translation surface, with
/// regular points forgotten.
#[derive(Debug, Clone)]
pub enum CanonicalForm {
    /// Genus one: a reduced basis of the period lattice.
    Torus { basis: [PlanarVec; 2] },
    /// Higher genus: the Delaunay decomposition numbered by a breadth-first
    /// walk from a canonically chosen side.
    Cells {
        cells: Vec<Cell>,
        source: Vec<usize>,
    },
}

impl PartialEq for CanonicalForm {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (CanonicalForm::Torus { basis: a }, CanonicalForm::Torus { basis: b }) => a == b,
            (CanonicalForm::Cells { cells: a, .. }, CanonicalForm::Cells { cells: b, .. }) => {
                cmp_code(a, b) == Ordering::Equal
            }
            _ => false,
        }
    }
}

impl CanonicalForm {
    pub fn to_surface(&self) -> TranslationSurface {
        match self {
            CanonicalForm::Torus { basis: [a, b] } => {
                let o = Vec2::zero();
                let poly = Polygon::new("A", vec![o.clone(), a.clone(), a + b, b.clone()]);
                let e = |i| EdgeRef::new(0, i);
                TranslationSurface::new(vec![poly], &[(e(0), e(2)), (e(1), e(3))])
                    .expect("reduced basis is positively oriented")
            }
            CanonicalForm::Cells { cells, .. } => {
                let polys = cells
                    .iter()
                    .enumerate()
                    .map(|(c, cell)| {
                        let mut verts = vec![Vec2::zero()];
                        for e in &cell.edges[..cell.edges.len() - 1] {
                            let next = verts.last().expect("nonempty") + e;
                            verts.push(next);
                        }
                        Polygon::new(format!("c{c}"), verts)
                    })
                    .collect();
                let mut pairs = Vec::new();
                for (c, cell) in cells.iter().enumerate() {
                    for (k, &(d, j)) in cell.glue.iter().enumerate() {
                        if (c, k) < (d, j) {
                            pairs.push((EdgeRef::new(c, k), EdgeRef::new(d, j)));
                        }
                    }
                }
                TranslationSurface::new(polys, &pairs).expect("cells form a valid surface")
            }
        }
    }
}

fn cmp_vec(a: &PlanarVec, b: &PlanarVec) -> Ordering {
    a.lex_cmp(b)
}

fn cmp_code(a: &[Cell], b: &[Cell]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        for (x, y) in a.iter().zip(b) {
            let o = x
                .edges
                .len()
                .cmp(&y.edges.len())
                .then_with(|| {
                    x.edges
                        .iter()
                        .zip(&y.edges)
                        .map(|(p, q)| cmp_vec(p, q))
                        .find(|o| o.is_ne())
                        .unwrap_or(Ordering::Equal)
                })
                .then_with(|| x.glue.cmp(&y.glue));
            if o.is_ne() {
                return o;
            }
        }
        Ordering::Equal
    })
}

/// Renumber cells by a breadth-first walk starting at side `seed`, each cell
/// rotated to begin at the side through which it was reached.
fn relabel(cells: &[Cell], seed: (usize, usize)) -> (Vec<Cell>, Vec<usize>) {
    let mut order: Vec<(usize, usize)> = vec![seed];
    let mut index: Vec<Option<usize>> = vec![None; cells.len()];
    index[seed.0] = Some(0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let (c, rot) = order[i];
        let len = cells[c].edges.len();
        for s in 0..len {
            let (d, j) = cells[c].glue[(rot + s) % len];
            if index[d].is_none() {
                index[d] = Some(order.len());
                queue.push_back(order.len());
                order.push((d, j));
            }
        }
    }
    let new_cells = order
        .iter()
        .map(|&(c, rot)| {
            let len = cells[c].edges.len();
            let edges = (0..len)
                .map(|s| cells[c].edges[(rot + s) % len].clone())
                .collect();
            let glue = (0..len)
                .map(|s| {
                    let (d, j) = cells[c].glue[(rot + s) % len];
                    let nd = index[d].expect("connected");
                    let dlen = cells[d].edges.len();
                    (nd, (j + dlen - order[nd].1) % dlen)
                })
                .collect();
            Cell {
                edges,
                glue,
                anchor: Vec2::zero(),
            }
        })
        .collect();
    (new_cells, order.iter().map(|&(c, _)| c).collect())
}

/// Round a real number to a nearest integer, exactly.
fn round_exact(x: &AlgNum) -> i64 {
    let mut m = x.to_f64().round() as i64;
    let half = AlgNum::from_ratio(1, 2);
    loop {
        let d = x - &AlgNum::from_int(m);
        if d.cmp_real(&half) == Ordering::Greater {
            m += 1;
        } else if d.cmp_real(&-&half) == Ordering::Less {
            m -= 1;
        } else {
            return m;
        }
    }
}

/// Basis of the lattice generated by vectors spanning a rank-2 lattice.
fn lattice_basis(gens: &[PlanarVec]) -> Result<[PlanarVec; 2], MovesError> {
    let g1 = gens
        .iter()
        .find(|g| !g.is_zero())
        .ok_or(MovesError::NotALattice)?;
    let g2 = gens
        .iter()
        .find(|g| !g1.cross(g).is_zero())
        .ok_or(MovesError::NotALattice)?;
    let det = g1.cross(g2);
    let mut coords = Vec::new();
    for w in gens {
        let a = (w.cross(g2) / det.clone()).to_rational();
        let b = (g1.cross(w) / det.clone()).to_rational();
        match (a, b) {
            (Some(a), Some(b)) => coords.push((a, b)),
            _ => return Err(MovesError::NotALattice),
        }
    }
    let den = coords.iter().fold(BigInt::one(), |acc, (a, b)| {
        acc.lcm(a.denom()).lcm(b.denom())
    });
    let scaled = |r: &BigRational| (r * BigRational::from_integer(den.clone())).to_integer();
    // Echelon basis (p, q), (0, r).
    let (mut p, mut q, mut r) = (BigInt::zero(), BigInt::zero(), BigInt::zero());
    for (a, b) in &coords {
        let (a, b) = (scaled(a), scaled(b));
        if a.is_zero() {
            r = r.gcd(&b);
            continue;
        }
        let eg = p.extended_gcd(&a);
        let g = eg.gcd;
        let new_q = &eg.x * &q + &eg.y * &b;
        let left = (&p / &g) * &b - (&a / &g) * &q;
        p = g;
        q = new_q;
        r = r.gcd(&left);
    }
    if r.is_zero() || p.is_zero() {
        return Err(MovesError::NotALattice);
    }
    let q = q.mod_floor(&r);
    let to_alg = |n: &BigInt| AlgNum::from_rational(&BigRational::new(n.clone(), den.clone()));
    let b1 = g1.scale(&to_alg(&p)) + g2.scale(&to_alg(&q));
    let b2 = g2.scale(&to_alg(&r));
    Ok([b1, b2])
}

/// Gauss-reduced, then canonically chosen basis of a lattice.
fn canonical_basis(basis: [PlanarVec; 2]) -> [PlanarVec; 2] {
    let [mut b1, mut b2] = basis;
    loop {
        if b2.norm2().cmp_real(&b1.norm2()) == Ordering::Less {
            std::mem::swap(&mut b1, &mut b2);
        }
        let mu = round_exact(&(b1.dot(&b2) / b1.norm2()));
        if mu == 0 {
            break;
        }
        b2 = &b2 - &b1.scale(&AlgNum::from_int(mu));
    }
    let mut cands = Vec::new();
    for i in -2i64..=2 {
        for j in -2i64..=2 {
            if (i, j) != (0, 0) {
                cands.push(b1.scale(&AlgNum::from_int(i)) + b2.scale(&AlgNum::from_int(j)));
            }
        }
    }
    let pick = |pool: Vec<&PlanarVec>, reference: &PlanarVec| -> PlanarVec {
        pool.into_iter()
            .min_by(|a, b| {
                a.norm2()
                    .cmp_real(&b.norm2())
                    .then_with(|| angle_cmp(reference, a, b))
            })
            .expect("candidates")
            .clone()
    };
    let x_axis = Vec2::from_i64(1, 0);
    let first = pick(cands.iter().collect(), &x_axis);
    let second = pick(
        cands
            .iter()
            .filter(|c| first.cross(c).signum() > 0)
            .collect(),
        &first,
    );
    [first, second]
}

fn torus_lattice(tri: &Triangulation) -> Result<[PlanarVec; 2], MovesError> {
    let mesh = &tri.mesh;
    let mut pos: Vec<Option<PlanarVec>> = vec![None; mesh.class_count()];
    pos[mesh.class(0, 0)] = Some(Vec2::zero());
    let mut changed = true;
    while changed {
        changed = false;
        for t in 0..mesh.len() {
            for k in 0..3 {
                let (a, b) = (mesh.class(t, k), mesh.class(t, k + 1));
                if let (Some(pa), None) = (&pos[a], &pos[b]) {
                    pos[b] = Some(pa + mesh.edge(t, k));
                    changed = true;
                }
            }
        }
    }
    let mut gens = Vec::new();
    for t in 0..mesh.len() {
        for k in 0..3 {
            let (a, b) = (mesh.class(t, k), mesh.class(t, k + 1));
            let (Some(pa), Some(pb)) = (&pos[a], &pos[b]) else {
                return Err(MovesError::NotALattice);
            };
            let g = &(pa + mesh.edge(t, k)) - pb;
            if !g.is_zero() {
                gens.push(g);
            }
        }
    }
    Ok(canonical_basis(lattice_basis(&gens)?))
}

/// Canonical form of a surface. Two surfaces are the same translation
/// surface exactly when their canonical forms are equal.
pub fn canonicalize(s: &TranslationSurface) -> Result<CanonicalForm, MovesError> {
    let mut tri = triangulate(s);
    if s.genus() == 1 {
        return Ok(CanonicalForm::Torus {
            basis: torus_lattice(&tri)?,
        });
    }
    for (v, cone) in s.cone_points().iter().enumerate() {
        if cone.angle_multiple == 1 {
            tri.remove_regular_vertex(v)?;
        }
    }
    tri.make_delaunay();
    let cells = delaunay_cells(&tri);
    let mut smallest: Option<&PlanarVec> = None;
    for cell in &cells {
        for e in &cell.edges {
            if smallest.is_none_or(|m| cmp_vec(e, m) == Ordering::Less) {
                smallest = Some(e);
            }
        }
    }
    let smallest = smallest.expect("at least one cell").clone();
    let mut best: Option<(Vec<Cell>, Vec<usize>)> = None;
    for (c, cell) in cells.iter().enumerate() {
        for (k, e) in cell.edges.iter().enumerate() {
            if *e != smallest {
                continue;
            }
            let cand = relabel(&cells, (c, k));
            if best
                .as_ref()
                .is_none_or(|b| cmp_code(&cand.0, &b.0) == Ordering::Less)
            {
                best = Some(cand);
            }
        }
    }
    let (mut out, source) = best.expect("seed exists");
    for (cell, &src) in out.iter_mut().zip(&source) {
        cell.anchor = cells[src].anchor.clone();
    }
    Ok(CanonicalForm::Cells { cells: out, source })
}

/// How two surfaces were matched.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// Genus one: the common reduced lattice basis.
    Lattice([PlanarVec; 2]),
    /// Higher genus: Delaunay cell of the first surface matched with a cell of the second.
    Cells(Vec<(usize, usize)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Equivalence {
    pub equivalent: bool,
    pub witness: Option<Witness>,
    /// Which invariant differs, when not equivalent.
    pub reason: Option<String>,
}

impl Equivalence {
    fn differ(reason: impl Into<String>) -> Equivalence {
        Equivalence {
            equivalent: false,
            witness: None,
            reason: Some(reason.into()),
        }
    }
}

/// Decide whether two presentations define the same translation surface
/// (regular marked points are ignored).
pub fn equivalent(
    a: &TranslationSurface,
    b: &TranslationSurface,
) -> Result<Equivalence, MovesError> {
    if a.area() != b.area() {
        return Ok(Equivalence::differ("area"));
    }
    if a.stratum().orders != b.stratum().orders {
        return Ok(Equivalence::differ("stratum"));
    }
    let (ca, cb) = (canonicalize(a)?, canonicalize(b)?);
    if ca != cb {
        return Ok(Equivalence::differ("canonical form"));
    }
    let witness = match (ca, cb) {
        (CanonicalForm::Torus { basis }, _) => Witness::Lattice(basis),
        (CanonicalForm::Cells { source: sa, .. }, CanonicalForm::Cells { source: sb, .. }) => {
            Witness::Cells(sa.into_iter().zip(sb).collect())
        }
        _ => unreachable!("equal canonical forms have the same kind"),
    };
    Ok(Equivalence {
        equivalent: true,
        witness: Some(witness),
        reason: None,
    })
}

/// Integer change of basis taking period coordinates `from` to `to`, when
/// both are charts of the same surface: `to[i] = Σ_j m[i][j] from[j]`.
/// Found by expressing each target vector through real-linear algebra over
/// the source and checking integrality.
pub fn period_change_of_basis(from: &[PlanarVec], to: &[PlanarVec]) -> Option<Vec<Vec<i64>>> {
    if from.len() != to.len() {
        return None;
    }
    let n = from.len();
    // Solve over the rationals in the coordinates of the coefficient field:
    // each planar vector contributes 2 * degree rational equations.
    let level = crate::algnum::lcm_levels(from.iter().chain(to).map(|v| v.level()));
    let flatten = |v: &PlanarVec| -> Vec<BigRational> {
        let mut out = v.x.lift(level).coeffs();
        out.extend(v.y.lift(level).coeffs());
        out
    };
    let cols: Vec<Vec<BigRational>> = from.iter().map(flatten).collect();
    let rows = cols[0].len();
    let mut result = Vec::new();
    for target in to {
        let rhs = flatten(target);
        // Augmented matrix rows x (n + 1).
        let mut m: Vec<Vec<BigRational>> = (0..rows)
            .map(|r| {
                let mut row: Vec<BigRational> = (0..n).map(|c| cols[c][r].clone()).collect();
                row.push(rhs[r].clone());
                row
            })
            .collect();
        let mut pivot_row = 0;
        let mut pivots = Vec::new();
        for c in 0..n {
            let Some(pr) = (pivot_row..rows).find(|&r| !m[r][c].is_zero()) else {
                return None;
            };
            m.swap(pivot_row, pr);
            let inv = m[pivot_row][c].recip();
            for x in m[pivot_row].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..rows {
                if r != pivot_row && !m[r][c].is_zero() {
                    let factor = m[r][c].clone();
                    let prow = m[pivot_row].clone();
                    for (x, p) in m[r].iter_mut().zip(&prow) {
                        *x = &*x - &factor * p;
                    }
                }
            }
            pivots.push(pivot_row);
            pivot_row += 1;
        }
        if (pivot_row..rows).any(|r| !m[r][n].is_zero()) {
            return None;
        }
        let mut coeffs = Vec::with_capacity(n);
        for &pr in &pivots {
            let v = &m[pr][n];
            if !v.is_integer() {
                return None;
            }
            coeffs.push(v.to_integer().to_i64()?);
        }
        result.push(coeffs);
    }
    Some(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn half() -> AlgNum {
        AlgNum::from_ratio(1, 2)
    }

    #[test]
    fn cut_square_along_diagonal() {
        let s = corpus::square_torus();
        let spec = CutSpec {
            polygon: 0,
            start: Vec2::from_i64(0, 0),
            end: Vec2::from_i64(1, 1),
        };
        let c = cut(&s, &spec).unwrap();
        assert_eq!(c.polygons().len(), 2);
        assert!(c.polygons().iter().all(|p| p.len() == 3));
        assert_eq!(c.area(), s.area());
        assert_eq!(c.stratum(), s.stratum());
        assert!(equivalent(&s, &c).unwrap().equivalent);
    }

    #[test]
    fn cut_square_along_midline() {
        let s = corpus::square_torus();
        let spec = CutSpec {
            polygon: 0,
            start: Vec2::new(half(), AlgNum::zero()),
            end: Vec2::new(half(), AlgNum::one()),
        };
        let c = cut(&s, &spec).unwrap();
        assert_eq!(c.polygons().len(), 2);
        let expect_left = [
            Vec2::new(half(), AlgNum::one()),
            Vec2::from_i64(0, 1),
            Vec2::from_i64(0, 0),
            Vec2::new(half(), AlgNum::zero()),
        ];
        let left = c
            .polygons()
            .iter()
            .find(|p| p.vertices().contains(&Vec2::from_i64(0, 0)))
            .unwrap();
        assert_eq!(left.len(), 4);
        for v in &expect_left {
            assert!(left.vertices().contains(v));
        }
        assert_eq!(c, corpus::fig3_chain()[1]);
        assert!(equivalent(&s, &c).unwrap().equivalent);
    }

    #[test]
    fn cut_errors() {
        let s = corpus::square_torus();
        let inner = CutSpec {
            polygon: 0,
            start: Vec2::new(half(), half()),
            end: Vec2::from_i64(1, 1),
        };
        assert_eq!(cut(&s, &inner), Err(MovesError::EndpointsNotOnBoundary));
        let along_edge = CutSpec {
            polygon: 0,
            start: Vec2::from_i64(0, 0),
            end: Vec2::from_i64(1, 0),
        };
        assert_eq!(cut(&s, &along_edge), Err(MovesError::SegmentNotInterior));
    }

    #[test]
    fn glue_undoes_cut() {
        let s = corpus::decagon_h11();
        let spec = CutSpec {
            polygon: 0,
            start: s.polygon(0).vertex(0).clone(),
            end: s.polygon(0).vertex(4).clone(),
        };
        let c = cut(&s, &spec).unwrap();
        let e = EdgeRef::new(0, c.polygon(0).len() - 1);
        let g = glue(&c, e).unwrap();
        assert_eq!(g.polygons().len(), s.polygons().len());
        assert_eq!(g.area(), s.area());
        assert!(equivalent(&s, &g).unwrap().equivalent);
    }

    #[test]
    fn glue_two_squares() {
        let s = corpus::four_square_torus();
        let g = glue(&s, EdgeRef::new(0, 1)).unwrap();
        assert_eq!(g.polygons().len(), 3);
        let merged = g.polygon(0);
        assert_eq!(merged.area2(), AlgNum::from_int(4));
        assert!(equivalent(&s, &g).unwrap().equivalent);
    }

    #[test]
    fn glue_errors() {
        let s = corpus::square_torus();
        assert_eq!(
            glue(&s, EdgeRef::new(0, 0)),
            Err(MovesError::SameFace(EdgeRef::new(0, 0)))
        );
        let a = Polygon::from_ints("A", &[(0, 0), (1, 0), (1, 1), (0, 1)]);
        let b = Polygon::from_ints(
            "B",
            &[
                (1, 0),
                (2, 0),
                (2, 1),
                (2, 2),
                (1, 2),
                (0, 2),
                (0, 1),
                (1, 1),
            ],
        );
        let e = EdgeRef::new;
        let s = TranslationSurface::new(
            vec![a, b],
            &[
                (e(0, 1), e(1, 7)),
                (e(0, 3), e(1, 1)),
                (e(1, 2), e(1, 5)),
                (e(0, 0), e(0, 2)),
                (e(1, 0), e(1, 3)),
                (e(1, 6), e(1, 4)),
            ],
        )
        .unwrap();
        assert_eq!(glue(&s, e(0, 1)), Err(MovesError::NonSimpleResult(e(0, 1))));
    }

    #[test]
    fn triangle_counts() {
        assert_eq!(triangulate(&corpus::square_torus()).mesh.len(), 2);
        assert_eq!(triangulate(&corpus::regular_octagon()).mesh.len(), 6);
        assert_eq!(triangulate(&corpus::decagon_h11()).mesh.len(), 8);
    }

    #[test]
    fn triangulation_preserves_invariants() {
        for s in [
            corpus::regular_octagon(),
            corpus::decagon_h11(),
            corpus::four_square_torus(),
        ] {
            let t = triangulate(&s).to_surface();
            assert_eq!(t.area(), s.area());
            assert_eq!(t.stratum(), s.stratum());
        }
    }

    #[test]
    fn delaunay_is_idempotent() {
        for s in [
            corpus::regular_octagon(),
            corpus::decagon_h11(),
            corpus::sheared_torus(7),
        ] {
            let d = delaunay(&s);
            assert!(d.is_delaunay());
            let mut again = d.clone();
            again.flips = 0;
            again.make_delaunay();
            assert_eq!(again.flips, 0);
        }
    }

    #[test]
    fn sheared_torus_flips_back() {
        let d = delaunay(&corpus::sheared_torus(9));
        assert!(d.flips > 0);
        let longest = (0..d.mesh.len())
            .flat_map(|t| (0..3).map(move |k| (t, k)))
            .map(|(t, k)| d.mesh.edge(t, k).norm2())
            .max_by(|a, b| a.cmp_real(b))
            .unwrap();
        assert_eq!(longest, AlgNum::from_int(2));
    }

    #[test]
    fn octagon_is_one_delaunay_cell() {
        let d = delaunay(&corpus::regular_octagon());
        let cocircular = (0..d.mesh.len())
            .flat_map(|t| (0..3).map(move |k| (t, k)))
            .filter(|&(t, k)| d.mesh.incircle(t, k) == 0)
            .count();
        assert_eq!(cocircular, 10);
        let cells = delaunay_cells(&d);
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].edges.len(), 8);
    }

    #[test]
    fn fig3_chain_is_one_surface() {
        let chain = corpus::fig3_chain();
        for a in &chain {
            for b in &chain {
                assert!(equivalent(a, b).unwrap().equivalent);
            }
        }
    }

    #[test]
    fn torus_images() {
        let sq = corpus::square_torus();
        assert!(
            equivalent(&sq, &corpus::sheared_torus(1))
                .unwrap()
                .equivalent
        );
        assert!(
            equivalent(&sq, &corpus::sheared_torus(5))
                .unwrap()
                .equivalent
        );
        let rot = equivalent(&sq, &corpus::rotated_torus()).unwrap();
        assert!(!rot.equivalent);
        assert_eq!(rot.reason.as_deref(), Some("canonical form"));
    }

    #[test]
    fn octagon_not_decagon() {
        let r = equivalent(&corpus::regular_octagon(), &corpus::decagon_h11()).unwrap();
        assert!(!r.equivalent);
    }

    #[test]
    fn octagon_cut_into_pieces_is_equivalent() {
        let s = corpus::regular_octagon();
        let p = s.polygon(0);
        let c1 = cut(
            &s,
            &CutSpec {
                polygon: 0,
                start: p.vertex(0).clone(),
                end: p.vertex(3).clone(),
            },
        )
        .unwrap();
        let c2 = cut(
            &c1,
            &CutSpec {
                polygon: 1,
                start: c1.polygon(1).vertex(0).clone(),
                end: c1.polygon(1).vertex(2).clone(),
            },
        )
        .unwrap();
        let r = equivalent(&s, &c2).unwrap();
        assert!(r.equivalent);
        assert!(matches!(r.witness, Some(Witness::Cells(_))));
    }

    #[test]
    fn marked_points_are_forgotten() {
        let s = corpus::regular_octagon();
        let p = s.polygon(0);
        let mid = (p.vertex(0) + p.vertex(1)).scale(&half());
        let c = cut(
            &s,
            &CutSpec {
                polygon: 0,
                start: mid,
                end: p.vertex(4).clone(),
            },
        )
        .unwrap();
        assert_eq!(c.stratum().extra_marked_points, 1);
        assert!(equivalent(&s, &c).unwrap().equivalent);
    }

    #[test]
    fn fig_new_coords_change_of_basis() {
        // v1 = (1,0), v2 = (0,1) on the square versus the parallelogram with
        // sides v1 and v1 + v2.
        let from = vec![Vec2::from_i64(1, 0), Vec2::from_i64(0, 1)];
        let to = vec![Vec2::from_i64(1, 0), Vec2::from_i64(1, 1)];
        assert_eq!(
            period_change_of_basis(&from, &to),
            Some(vec![vec![1, 0], vec![1, 1]])
        );
    }
}
