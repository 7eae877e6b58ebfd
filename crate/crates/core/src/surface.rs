//! Translation surfaces presented as polygons with edges glued by translations.
//!
//! Every polygon lives in its own copy of the plane, is simple and
//! counterclockwise. Edge `i` of a polygon runs from vertex `i` to vertex
//! `i + 1`; glued edges have opposite edge vectors.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::algnum::{lcm_levels, AlgNum};
use crate::geom;
use crate::scalar::{angle_cmp, PlanarVec, Vec2};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("surface has no polygons")]
    Empty,
    #[error("polygon {0} has fewer than 3 vertices")]
    TooFewVertices(String),
    #[error("polygon {0} has a zero-length edge")]
    ZeroLengthEdge(String),
    #[error("polygon {0} is not simple")]
    SelfIntersectingPolygon(String),
    #[error("polygon {0} is not counterclockwise")]
    NotCounterclockwise(String),
    #[error("polygon {0} has a coordinate that is not real")]
    NonRealCoordinate(String),
    #[error("duplicate polygon label {0}")]
    DuplicateLabel(String),
    #[error("edge reference {0} does not exist")]
    InvalidEdgeRef(EdgeRef),
    #[error("edge {0} is not paired")]
    UnpairedEdge(EdgeRef),
    #[error("edge {0} is paired more than once or with itself")]
    EdgePairedTwice(EdgeRef),
    #[error("edges {0} and {1} are not translates of each other")]
    NonParallelPair(EdgeRef, EdgeRef),
    #[error("edges {0} and {1} put their polygons on the same side")]
    SameSidePair(EdgeRef, EdgeRef),
    #[error("gluing is not connected")]
    Disconnected,
    #[error("vertex class {0} has total angle that is not a multiple of 2π")]
    AngleNotMultipleOf2Pi(usize),
    #[error("genus from cone angles ({0}) disagrees with Euler characteristic ({1})")]
    GenusMismatch(i64, i64),
}

/// An edge of a polygon in a surface: edge `edge` of polygon `polygon`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeRef {
    pub polygon: usize,
    pub edge: usize,
}

impl EdgeRef {
    pub fn new(polygon: usize, edge: usize) -> EdgeRef {
        EdgeRef { polygon, edge }
    }
}

impl fmt::Display for EdgeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.polygon, self.edge)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    pub label: String,
    vertices: Vec<PlanarVec>,
}

impl Polygon {
    pub fn new(label: impl Into<String>, vertices: Vec<PlanarVec>) -> Polygon {
        Polygon {
            label: label.into(),
            vertices,
        }
    }

    /// Polygon with integer vertex coordinates.
    pub fn from_ints(label: impl Into<String>, pts: &[(i64, i64)]) -> Polygon {
        Polygon::new(
            label,
            pts.iter().map(|&(x, y)| Vec2::from_i64(x, y)).collect(),
        )
    }

    pub fn vertices(&self) -> &[PlanarVec] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &PlanarVec {
        &self.vertices[i % self.vertices.len()]
    }

    pub fn edge_vector(&self, i: usize) -> PlanarVec {
        self.vertex(i + 1) - self.vertex(i)
    }

    pub fn area2(&self) -> AlgNum {
        geom::signed_area2(&self.vertices)
    }

    pub fn translated(&self, by: &PlanarVec) -> Polygon {
        Polygon::new(
            self.label.clone(),
            self.vertices.iter().map(|v| v + by).collect(),
        )
    }

    fn validate(&self) -> Result<(), SurfaceError> {
        let n = self.vertices.len();
        if n < 3 {
            return Err(SurfaceError::TooFewVertices(self.label.clone()));
        }
        for v in &self.vertices {
            if !v.x.is_real() || !v.y.is_real() {
                return Err(SurfaceError::NonRealCoordinate(self.label.clone()));
            }
        }
        for i in 0..n {
            if self.edge_vector(i).is_zero() {
                return Err(SurfaceError::ZeroLengthEdge(self.label.clone()));
            }
        }
        if !geom::is_simple(&self.vertices) {
            return Err(SurfaceError::SelfIntersectingPolygon(self.label.clone()));
        }
        if self.area2().sign_real() <= 0 {
            return Err(SurfaceError::NotCounterclockwise(self.label.clone()));
        }
        Ok(())
    }
}

/// A corner of a polygon: vertex `vertex` of polygon `polygon`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Corner {
    pub polygon: usize,
    pub vertex: usize,
}

/// A point of the surface coming from polygon corners.
#[derive(Debug, Clone, PartialEq)]
pub struct ConePoint {
    /// Corners in counterclockwise order around the point.
    pub corners: Vec<Corner>,
    /// For each corner, how many full turns precede its outgoing edge when
    /// sweeping counterclockwise from the first corner's outgoing edge.
    pub turns: Vec<u32>,
    /// Total angle divided by 2π.
    pub angle_multiple: u32,
}

impl ConePoint {
    /// Order `k` of the singularity: total angle is `2π(k + 1)`.
    pub fn order(&self) -> u32 {
        self.angle_multiple - 1
    }
}

/// The stratum `H(k_1, …, k_s)` of a surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumSignature {
    /// Orders of the singularities, largest first. A surface without
    /// singularities reports a single marked point of order 0.
    pub orders: Vec<u32>,
    /// Regular vertex classes (total angle 2π) of the presentation that do not appear in `orders`.
    pub extra_marked_points: usize,
    pub genus: u32,
    /// Complex dimension `2g + s - 1`.
    pub dimension: u32,
}

impl fmt::Display for StratumSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders.iter().map(u32::to_string).collect();
        write!(f, "H({})", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TranslationSurface {
    polygons: Vec<Polygon>,
    partner: Vec<Vec<EdgeRef>>,
    level: u32,
    cones: Vec<ConePoint>,
    class_of: Vec<Vec<usize>>,
    pub name: Option<String>,
}

/// Validate polygons and a pairing and assemble a surface.
pub fn build_surface(
    polygons: Vec<Polygon>,
    pairs: &[(EdgeRef, EdgeRef)],
) -> Result<TranslationSurface, SurfaceError> {
    TranslationSurface::new(polygons, pairs)
}

impl TranslationSurface {
    pub fn new(
        polygons: Vec<Polygon>,
        pairs: &[(EdgeRef, EdgeRef)],
    ) -> Result<TranslationSurface, SurfaceError> {
        if polygons.is_empty() {
            return Err(SurfaceError::Empty);
        }
        let level = lcm_levels(
            polygons
                .iter()
                .flat_map(|p| p.vertices.iter())
                .map(|v| v.level()),
        );
        let polygons: Vec<Polygon> = polygons
            .into_iter()
            .map(|p| Polygon {
                label: p.label,
                vertices: p.vertices.iter().map(|v| v.lift(level)).collect(),
            })
            .collect();
        for (i, p) in polygons.iter().enumerate() {
            p.validate()?;
            if polygons[..i].iter().any(|q| q.label == p.label) {
                return Err(SurfaceError::DuplicateLabel(p.label.clone()));
            }
        }
        let mut partner: Vec<Vec<Option<EdgeRef>>> =
            polygons.iter().map(|p| vec![None; p.len()]).collect();
        let check = |e: &EdgeRef| -> Result<(), SurfaceError> {
            if e.polygon >= polygons.len() || e.edge >= polygons[e.polygon].len() {
                Err(SurfaceError::InvalidEdgeRef(*e))
            } else {
                Ok(())
            }
        };
        for (a, b) in pairs {
            check(a)?;
            check(b)?;
            if a == b {
                return Err(SurfaceError::EdgePairedTwice(*a));
            }
            for e in [a, b] {
                if partner[e.polygon][e.edge].is_some() {
                    return Err(SurfaceError::EdgePairedTwice(*e));
                }
            }
            let va = polygons[a.polygon].edge_vector(a.edge);
            let vb = polygons[b.polygon].edge_vector(b.edge);
            if (&va + &vb).is_zero() {
                partner[a.polygon][a.edge] = Some(*b);
                partner[b.polygon][b.edge] = Some(*a);
            } else if va == vb {
                return Err(SurfaceError::SameSidePair(*a, *b));
            } else {
                return Err(SurfaceError::NonParallelPair(*a, *b));
            }
        }
        let partner: Vec<Vec<EdgeRef>> = partner
            .into_iter()
            .enumerate()
            .map(|(p, edges)| {
                edges
                    .into_iter()
                    .enumerate()
                    .map(|(i, e)| e.ok_or(SurfaceError::UnpairedEdge(EdgeRef::new(p, i))))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;

        // connectivity over polygons
        let mut seen = vec![false; polygons.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(p) = stack.pop() {
            for e in &partner[p] {
                if !seen[e.polygon] {
                    seen[e.polygon] = true;
                    stack.push(e.polygon);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(SurfaceError::Disconnected);
        }

        let mut s = TranslationSurface {
            polygons,
            partner,
            level,
            cones: Vec::new(),
            class_of: Vec::new(),
            name: None,
        };
        s.compute_cones()?;
        s.genus_checked()?;
        Ok(s)
    }

    fn compute_cones(&mut self) -> Result<(), SurfaceError> {
        let mut class_of: Vec<Vec<usize>> = self
            .polygons
            .iter()
            .map(|p| vec![usize::MAX; p.len()])
            .collect();
        let mut cones = Vec::new();
        for p in 0..self.polygons.len() {
            for v in 0..self.polygons[p].len() {
                if class_of[p][v] != usize::MAX {
                    continue;
                }
                let id = cones.len();
                let start = Corner {
                    polygon: p,
                    vertex: v,
                };
                let reference = self.polygons[p].edge_vector(v);
                let mut corners = Vec::new();
                let mut turns = Vec::new();
                let mut wraps = 0u32;
                let mut cur = start;
                loop {
                    class_of[cur.polygon][cur.vertex] = id;
                    corners.push(cur);
                    turns.push(wraps);
                    let poly = &self.polygons[cur.polygon];
                    let n = poly.len();
                    let out_dir = poly.edge_vector(cur.vertex);
                    let incoming = EdgeRef::new(cur.polygon, (cur.vertex + n - 1) % n);
                    let next_edge = self.partner(incoming);
                    let next = Corner {
                        polygon: next_edge.polygon,
                        vertex: next_edge.edge,
                    };
                    let next_dir = self.polygons[next.polygon].edge_vector(next.vertex);
                    if angle_cmp(&reference, &next_dir, &out_dir) != Ordering::Greater {
                        wraps += 1;
                    }
                    if next == start {
                        if !next_dir.same_direction(&reference) {
                            return Err(SurfaceError::AngleNotMultipleOf2Pi(id));
                        }
                        break;
                    }
                    if corners.len() > self.num_corners() {
                        return Err(SurfaceError::AngleNotMultipleOf2Pi(id));
                    }
                    cur = next;
                }
                cones.push(ConePoint {
                    corners,
                    turns,
                    angle_multiple: wraps,
                });
            }
        }
        self.cones = cones;
        self.class_of = class_of;
        Ok(())
    }

    fn num_corners(&self) -> usize {
        self.polygons.iter().map(Polygon::len).sum()
    }

    fn genus_checked(&self) -> Result<u32, SurfaceError> {
        let v = self.cones.len() as i64;
        let e = self.num_corners() as i64 / 2;
        let f = self.polygons.len() as i64;
        let chi = v - e + f;
        let sum_k: i64 = self.cones.iter().map(|c| c.order() as i64).sum();
        // 2 - 2g = χ and 2g - 2 = Σk
        if (2 - chi) % 2 != 0 || sum_k + chi != 0 {
            return Err(SurfaceError::GenusMismatch((sum_k + 2) / 2, (2 - chi) / 2));
        }
        Ok(((2 - chi) / 2) as u32)
    }

    pub fn polygons(&self) -> &[Polygon] {
        &self.polygons
    }

    pub fn polygon(&self, i: usize) -> &Polygon {
        &self.polygons[i]
    }

    pub fn polygon_index(&self, label: &str) -> Option<usize> {
        self.polygons.iter().position(|p| p.label == label)
    }

    /// Common cyclotomic level of all coordinates.
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn partner(&self, e: EdgeRef) -> EdgeRef {
        self.partner[e.polygon][e.edge]
    }

    pub fn edge_vector(&self, e: EdgeRef) -> PlanarVec {
        self.polygons[e.polygon].edge_vector(e.edge)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeRef> + '_ {
        self.polygons
            .iter()
            .enumerate()
            .flat_map(|(p, poly)| (0..poly.len()).map(move |i| EdgeRef::new(p, i)))
    }

    /// Each glued pair once, smaller reference first.
    pub fn pairs(&self) -> Vec<(EdgeRef, EdgeRef)> {
        self.edges()
            .filter_map(|e| {
                let f = self.partner(e);
                (e < f).then_some((e, f))
            })
            .collect()
    }

    /// Vertex classes with their total angles.
    pub fn cone_points(&self) -> &[ConePoint] {
        &self.cones
    }

    /// Index into [`cone_points`](Self::cone_points) of the class containing a corner.
    pub fn vertex_class(&self, c: Corner) -> usize {
        self.class_of[c.polygon][c.vertex]
    }

    pub fn genus(&self) -> u32 {
        self.genus_checked().expect("validated surface")
    }

    pub fn stratum(&self) -> StratumSignature {
        let genus = self.genus();
        let mut orders: Vec<u32> = self
            .cones
            .iter()
            .map(ConePoint::order)
            .filter(|&k| k > 0)
            .collect();
        orders.sort_unstable_by(|a, b| b.cmp(a));
        let regular = self.cones.iter().filter(|c| c.order() == 0).count();
        let extra_marked_points = if orders.is_empty() {
            orders.push(0);
            regular - 1
        } else {
            regular
        };
        let dimension = 2 * genus + orders.len() as u32 - 1;
        StratumSignature {
            orders,
            extra_marked_points,
            genus,
            dimension,
        }
    }

    /// Total area (sum of polygon areas).
    pub fn area(&self) -> AlgNum {
        let twice = self
            .polygons
            .iter()
            .fold(AlgNum::zero(), |acc, p| acc + p.area2());
        twice / AlgNum::from_int(2)
    }

    /// Polygons and pairing in a form accepted by [`TranslationSurface::new`].
    pub fn into_parts(self) -> (Vec<Polygon>, Vec<(EdgeRef, EdgeRef)>) {
        let pairs = self.pairs();
        (self.polygons, pairs)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> TranslationSurface {
        self.name = Some(name.into());
        self
    }
}

/// Period coordinates: holonomies of the triangulation edges outside a
/// spanning tree of the dual graph. Every edge vector of the triangulation is
/// an integer combination of these.
#[derive(Debug, Clone)]
pub struct PeriodCoordinates {
    /// Basis holonomies.
    pub edges: Vec<PlanarVec>,
    /// Triangulation edges (triangle, side) carrying the basis vectors.
    pub basis: Vec<(usize, usize)>,
    /// For every triangle side, its integer coefficients on the basis.
    pub expansion: Vec<[Vec<i64>; 3]>,
    pub triangulation: crate::moves::Triangulation,
}

impl PeriodCoordinates {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Holonomy of triangle side `(t, k)` recomputed from the basis.
    pub fn evaluate(&self, t: usize, k: usize) -> PlanarVec {
        self.expansion[t][k]
            .iter()
            .zip(&self.edges)
            .fold(Vec2::zero(), |acc, (&c, v)| {
                acc + v.scale(&AlgNum::from_int(c))
            })
    }
}

/// Period coordinates from the deterministic ear-clipping triangulation.
pub fn period_coordinates(s: &TranslationSurface) -> PeriodCoordinates {
    let tri = crate::moves::triangulate(s);
    let mesh = &tri.mesh;
    let nt = mesh.len();
    // Dual spanning tree by BFS from triangle 0.
    let mut in_tree = vec![[false; 3]; nt];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; nt];
    let mut order = vec![0usize];
    let mut seen = vec![false; nt];
    seen[0] = true;
    let mut head = 0;
    while head < order.len() {
        let t = order[head];
        head += 1;
        for k in 0..3 {
            let (u, j) = mesh.neighbor(t, k);
            if !seen[u] {
                seen[u] = true;
                in_tree[t][k] = true;
                in_tree[u][j] = true;
                parent[u] = Some((t, k));
                order.push(u);
            }
        }
    }
    // Basis: one side of each glued pair not crossed by the tree.
    let mut basis = Vec::new();
    let mut index = vec![[usize::MAX; 3]; nt];
    for t in 0..nt {
        for k in 0..3 {
            if in_tree[t][k] || index[t][k] != usize::MAX {
                continue;
            }
            let (u, j) = mesh.neighbor(t, k);
            index[t][k] = basis.len();
            index[u][j] = basis.len();
            basis.push((t, k));
        }
    }
    let n = basis.len();
    let mut expansion: Vec<[Vec<i64>; 3]> = vec![[vec![0; n], vec![0; n], vec![0; n]]; nt];
    let mut known = vec![[false; 3]; nt];
    for (b, &(t, k)) in basis.iter().enumerate() {
        let (u, j) = mesh.neighbor(t, k);
        expansion[t][k][b] = 1;
        expansion[u][j][b] = -1;
        known[t][k] = true;
        known[u][j] = true;
    }
    // Resolve tree edges from the leaves inward: in each triangle the three
    // sides sum to zero, so a triangle with one unknown side (its parent
    // link) determines it.
    for &t in order.iter().rev() {
        if let Some((pt, pk)) = parent[t] {
            let (_, j) = mesh.neighbor(pt, pk);
            let mut acc = vec![0i64; n];
            for k in 0..3 {
                if k == j {
                    continue;
                }
                debug_assert!(known[t][k], "tree resolution order");
                for (a, c) in acc.iter_mut().zip(&expansion[t][k]) {
                    *a -= c;
                }
            }
            expansion[pt][pk] = acc.iter().map(|c| -c).collect();
            expansion[t][j] = acc;
            known[t][j] = true;
            known[pt][pk] = true;
        }
    }
    let edges = basis
        .iter()
        .map(|&(t, k)| mesh.edge(t, k).clone())
        .collect();
    PeriodCoordinates {
        edges,
        basis,
        expansion,
        triangulation: tri,
    }
}

impl fmt::Display for TranslationSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "surface with {} polygons, stratum {}",
            self.polygons.len(),
            self.stratum()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn square_torus() {
        let s = corpus::square_torus();
        assert_eq!(s.cone_points().len(), 1);
        assert_eq!(s.cone_points()[0].angle_multiple, 1);
        let st = s.stratum();
        assert_eq!((st.orders.clone(), st.genus, st.dimension), (vec![0], 1, 2));
        assert_eq!(st.to_string(), "H(0)");
        assert_eq!(s.area(), AlgNum::one());
    }

    #[test]
    fn octagon_has_one_6pi_point() {
        let s = corpus::regular_octagon();
        assert_eq!(s.cone_points().len(), 1);
        assert_eq!(s.cone_points()[0].angle_multiple, 3);
        let st = s.stratum();
        assert_eq!(st.to_string(), "H(2)");
        assert_eq!((st.genus, st.dimension), (2, 4));
        let expected = AlgNum::from_int(2) + AlgNum::from_int(2) * AlgNum::sqrt2();
        assert_eq!(s.area(), expected);
        assert!((s.area().to_f64() - (2.0 + 2.0 * 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn decagon_has_two_4pi_points() {
        let s = corpus::decagon_h11();
        let angles: Vec<u32> = s.cone_points().iter().map(|c| c.angle_multiple).collect();
        assert_eq!(angles, vec![2, 2]);
        let st = s.stratum();
        assert_eq!(st.to_string(), "H(1,1)");
        assert_eq!((st.genus, st.dimension), (2, 5));
    }

    #[test]
    fn four_square_torus_area() {
        let s = corpus::four_square_torus();
        assert_eq!(s.area(), AlgNum::from_int(4));
        assert_eq!(s.stratum().to_string(), "H(0)");
        assert_eq!(s.stratum().extra_marked_points, 3);
    }

    #[test]
    fn rejects_bad_pairings() {
        let sq = Polygon::from_ints("A", &[(0, 0), (1, 0), (1, 1), (0, 1)]);
        let e = |i| EdgeRef::new(0, i);
        assert_eq!(
            build_surface(vec![sq.clone()], &[(e(2), e(1)), (e(0), e(3))]),
            Err(SurfaceError::NonParallelPair(e(2), e(1)))
        );
        assert_eq!(
            build_surface(vec![sq.clone()], &[(e(0), e(2))]),
            Err(SurfaceError::UnpairedEdge(e(1)))
        );
        let a = Polygon::from_ints("A", &[(0, 0), (1, 0), (1, 1), (0, 1)]);
        let b = Polygon::from_ints("B", &[(0, 0), (1, 0), (1, 1), (0, 1)]);
        let f = |p, i| EdgeRef::new(p, i);
        assert_eq!(
            build_surface(
                vec![a.clone(), b.clone()],
                &[
                    (f(0, 0), f(1, 0)),
                    (f(0, 2), f(1, 2)),
                    (f(0, 1), f(0, 3)),
                    (f(1, 1), f(1, 3))
                ]
            ),
            Err(SurfaceError::SameSidePair(f(0, 0), f(1, 0)))
        );
        assert_eq!(
            build_surface(
                vec![a, b],
                &[
                    (f(0, 0), f(0, 2)),
                    (f(0, 1), f(0, 3)),
                    (f(1, 0), f(1, 2)),
                    (f(1, 1), f(1, 3))
                ]
            ),
            Err(SurfaceError::Disconnected)
        );
        let bow = Polygon::from_ints("X", &[(0, 0), (1, 1), (1, 0), (0, 1)]);
        assert_eq!(
            build_surface(vec![bow], &[(e(0), e(2)), (e(1), e(3))]),
            Err(SurfaceError::SelfIntersectingPolygon("X".into()))
        );
        let cw = Polygon::from_ints("C", &[(0, 0), (0, 1), (1, 1), (1, 0)]);
        assert_eq!(
            build_surface(vec![cw], &[(e(0), e(2)), (e(1), e(3))]),
            Err(SurfaceError::NotCounterclockwise("C".into()))
        );
    }

    #[test]
    fn period_coordinate_counts() {
        assert_eq!(period_coordinates(&corpus::square_torus()).len(), 2);
        assert_eq!(period_coordinates(&corpus::regular_octagon()).len(), 4);
        assert_eq!(period_coordinates(&corpus::decagon_h11()).len(), 5);
    }

    #[test]
    fn period_coordinates_span_all_edges() {
        for s in [
            corpus::regular_octagon(),
            corpus::decagon_h11(),
            corpus::four_square_torus(),
        ] {
            let pc = period_coordinates(&s);
            let mesh = &pc.triangulation.mesh;
            for t in 0..mesh.len() {
                for k in 0..3 {
                    assert_eq!(&pc.evaluate(t, k), mesh.edge(t, k));
                }
            }
        }
    }
}
