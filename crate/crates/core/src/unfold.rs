//! Unfolding a rational polygon into a translation surface: one copy of the
//! polygon per element of the group generated by the linear parts of the
//! reflections in its sides, glued so that billiard paths become straight.

use num_integer::Integer;
use thiserror::Error;

use crate::algnum::{lcm_levels, AlgNum};
use crate::geom::{self, Location};
use crate::gl2::{map_polygon, mapped_edge, FieldMatrix};
use crate::scalar::{PlanarVec, Vec2};
use crate::surface::{EdgeRef, Polygon, SurfaceError, TranslationSurface};

/// Default cap on the size of a reflection group.
pub const DEFAULT_GROUP_BOUND: usize = 4096;

#[derive(Debug, Error, PartialEq)]
pub enum UnfoldError {
    #[error("a polygon needs at least 3 vertices")]
    TooFewVertices,
    #[error("polygon is not simple")]
    NotSimple,
    #[error("polygon is not counterclockwise")]
    NotCounterclockwise,
    #[error("coordinates must be real")]
    NonRealCoordinate,
    #[error("angle at vertex {0} is not a rational multiple of π")]
    AngleNotRational(usize),
    #[error("reflection group exceeds {0} elements")]
    GroupTooLarge(usize),
    #[error("point is not on copy {0}")]
    PointNotOnSurface(usize),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// A simple polygon whose interior angles are all rational multiples of π.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalPolygon {
    vertices: Vec<PlanarVec>,
    /// Interior angle at each vertex as `(p, q)` meaning `pπ/q` in lowest terms.
    angles: Vec<(u32, u32)>,
}

impl RationalPolygon {
    pub fn new(vertices: Vec<PlanarVec>) -> Result<RationalPolygon, UnfoldError> {
        let n = vertices.len();
        if n < 3 {
            return Err(UnfoldError::TooFewVertices);
        }
        if !vertices.iter().all(|v| v.x.is_real() && v.y.is_real()) {
            return Err(UnfoldError::NonRealCoordinate);
        }
        let level = lcm_levels(vertices.iter().map(|v| v.level()));
        let vertices: Vec<PlanarVec> = vertices.iter().map(|v| v.lift(level)).collect();
        if !geom::is_simple(&vertices) {
            return Err(UnfoldError::NotSimple);
        }
        if geom::signed_area2(&vertices).sign_real() <= 0 {
            return Err(UnfoldError::NotCounterclockwise);
        }
        let angles = (0..n)
            .map(|i| interior_angle(&vertices, i).ok_or(UnfoldError::AngleNotRational(i)))
            .collect::<Result<_, _>>()?;
        Ok(RationalPolygon { vertices, angles })
    }

    pub fn from_ints(pts: &[(i64, i64)]) -> Result<RationalPolygon, UnfoldError> {
        RationalPolygon::new(pts.iter().map(|&(x, y)| Vec2::from_i64(x, y)).collect())
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

    pub fn angles(&self) -> &[(u32, u32)] {
        &self.angles
    }

    pub fn edge_vector(&self, i: usize) -> PlanarVec {
        let n = self.len();
        &self.vertices[(i + 1) % n] - &self.vertices[i % n]
    }

    pub fn area(&self) -> AlgNum {
        geom::signed_area2(&self.vertices) / AlgNum::from_int(2)
    }

    /// Average of the vertices.
    pub fn centre(&self) -> PlanarVec {
        let n = AlgNum::from_int(self.len() as i64);
        let sum = self
            .vertices
            .iter()
            .fold(Vec2::zero(), |acc, v| acc + v.clone());
        Vec2::new(&sum.x / &n, &sum.y / &n)
    }

    /// `2 · lcm(q_i)` over the angle denominators.
    pub fn expected_group_order(&self) -> usize {
        2 * self
            .angles
            .iter()
            .fold(1usize, |acc, &(_, q)| acc.lcm(&(q as usize)))
    }

    pub fn to_polygon(&self, label: impl Into<String>) -> Polygon {
        Polygon::new(label, self.vertices.clone())
    }
}

/// The interior angle at vertex `i` as a reduced fraction of π, if rational.
///
/// With `u` the outgoing side and `w` the reversed incoming side, the angle
/// `α` from `u` to `w` satisfies `e^{2iα} = (u·w + i u×w)² / (|u|²|w|²)`,
/// which lies in the coordinate field adjoined `i`. The only roots of unity
/// there have order dividing `lcm(level, 4)`.
fn interior_angle(v: &[PlanarVec], i: usize) -> Option<(u32, u32)> {
    let n = v.len();
    let u = &v[(i + 1) % n] - &v[i];
    let w = &v[(i + n - 1) % n] - &v[i];
    let dot = u.dot(&w);
    let cross = u.cross(&w);
    if cross.is_zero() {
        return Some((1, 1));
    }
    let m = lcm_levels([u.level(), w.level(), 4]);
    let denom = u.norm2() * w.norm2();
    let re = (&dot * &dot - &cross * &cross) / &denom;
    let im = (&(&dot * &cross) * &AlgNum::from_int(2)) / &denom;
    let z = re + AlgNum::zeta(4) * im;
    let zeta = AlgNum::zeta(m);
    let mut power = AlgNum::one();
    for k in 0..m {
        if power == z {
            // 2α = 2πk/m modulo 2π, so α = πk/m modulo π
            let k = if cross.sign_real() > 0 { k } else { k + m };
            let g = k.gcd(&m);
            return Some((k / g, m / g));
        }
        power = &power * &zeta;
    }
    None
}

/// The finite group generated by the reflections in the sides of a rational
/// polygon, listed identity first and then in breadth-first order over the
/// side reflections.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionGroup {
    elements: Vec<FieldMatrix>,
    /// `generators[k]` is the reflection in side `k`.
    generators: Vec<FieldMatrix>,
    /// `right[h][k]` is the index of `elements[h] · generators[k]`.
    right: Vec<Vec<usize>>,
}

impl ReflectionGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[FieldMatrix] {
        &self.elements
    }

    pub fn element(&self, h: usize) -> &FieldMatrix {
        &self.elements[h]
    }

    pub fn generator(&self, k: usize) -> &FieldMatrix {
        &self.generators[k]
    }

    pub fn times_generator(&self, h: usize, k: usize) -> usize {
        self.right[h][k]
    }

    pub fn index_of(&self, g: &FieldMatrix) -> Option<usize> {
        self.elements.iter().position(|x| x == g)
    }
}

pub fn reflection_group(p: &RationalPolygon) -> Result<ReflectionGroup, UnfoldError> {
    reflection_group_bounded(p, DEFAULT_GROUP_BOUND)
}

pub fn reflection_group_bounded(
    p: &RationalPolygon,
    bound: usize,
) -> Result<ReflectionGroup, UnfoldError> {
    let generators: Vec<FieldMatrix> = (0..p.len())
        .map(|k| FieldMatrix::reflection(&p.edge_vector(k)))
        .collect();
    let mut elements = vec![FieldMatrix::identity()];
    let mut right: Vec<Vec<usize>> = Vec::new();
    let mut h = 0;
    while h < elements.len() {
        let mut row = Vec::with_capacity(generators.len());
        for r in &generators {
            let prod = &elements[h] * r;
            let idx = match elements.iter().position(|x| *x == prod) {
                Some(i) => i,
                None => {
                    if elements.len() == bound {
                        return Err(UnfoldError::GroupTooLarge(bound));
                    }
                    elements.push(prod);
                    elements.len() - 1
                }
            };
            row.push(idx);
        }
        right.push(row);
        h += 1;
    }
    Ok(ReflectionGroup {
        elements,
        generators,
        right,
    })
}

/// The unfolded surface together with the data needed to fold back.
/// Copy `h` is polygon `h` of the surface and equals `g_h(P - centre)`.
#[derive(Debug, Clone)]
pub struct Unfolding {
    pub surface: TranslationSurface,
    pub group: ReflectionGroup,
    pub polygon: RationalPolygon,
    pub centre: PlanarVec,
}

impl Unfolding {
    pub fn copies(&self) -> usize {
        self.group.order()
    }

    /// Whether copy `h` is a mirror image of the polygon.
    pub fn reverses(&self, h: usize) -> bool {
        self.group.element(h).det().sign_real() < 0
    }

    /// Position of a point of the polygon in copy `h`.
    pub fn lift_point(&self, x: &PlanarVec, h: usize) -> PlanarVec {
        self.group.element(h).apply(&(x - &self.centre))
    }

    /// A direction in the polygon seen in copy `h`.
    pub fn lift_direction(&self, d: &PlanarVec, h: usize) -> PlanarVec {
        self.group.element(h).apply(d)
    }

    /// Map a point of copy `h` back to the polygon.
    pub fn fold_point(&self, h: usize, y: &PlanarVec) -> Result<(PlanarVec, usize), UnfoldError> {
        if h >= self.copies()
            || geom::locate(y, self.surface.polygon(h).vertices()) == Location::Outside
        {
            return Err(UnfoldError::PointNotOnSurface(h));
        }
        let x = self.group.element(h).transpose().apply(y);
        Ok((&x + &self.centre, h))
    }

    /// Map a direction in copy `h` back to the polygon.
    pub fn fold_direction(&self, h: usize, d: &PlanarVec) -> PlanarVec {
        self.group.element(h).transpose().apply(d)
    }

    /// The side of the polygon that edge `e` of copy `h` comes from.
    pub fn original_edge(&self, h: usize, e: usize) -> usize {
        mapped_edge(self.polygon.len(), e, self.reverses(h))
    }
}

pub fn unfold(p: &RationalPolygon) -> Result<Unfolding, UnfoldError> {
    unfold_bounded(p, DEFAULT_GROUP_BOUND)
}

pub fn unfold_bounded(p: &RationalPolygon, bound: usize) -> Result<Unfolding, UnfoldError> {
    let group = reflection_group_bounded(p, bound)?;
    let centre = p.centre();
    let base = p.to_polygon("P");
    let n = p.len();
    let reverses: Vec<bool> = group
        .elements()
        .iter()
        .map(|g| g.det().sign_real() < 0)
        .collect();
    let polys: Vec<Polygon> = group
        .elements()
        .iter()
        .enumerate()
        .map(|(h, g)| {
            map_polygon(&base, format!("g{h}"), reverses[h], |v| {
                g.apply(&(v - &centre))
            })
        })
        .collect();
    let mut pairs = Vec::with_capacity(group.order() * n / 2);
    for h in (0..group.order()).filter(|&h| !reverses[h]) {
        for k in 0..n {
            let r = group.times_generator(h, k);
            pairs.push((
                EdgeRef::new(h, mapped_edge(n, k, false)),
                EdgeRef::new(r, mapped_edge(n, k, reverses[r])),
            ));
        }
    }
    let surface = TranslationSurface::new(polys, &pairs)?.with_name("unfolding");
    Ok(Unfolding {
        surface,
        group,
        polygon: p.clone(),
        centre,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::moves::equivalent;

    #[test]
    fn angle_detection() {
        let sq = corpus::unit_square_polygon();
        assert_eq!(sq.angles(), &[(1, 2); 4]);
        let t = corpus::triangle_pi8();
        assert_eq!(t.angles(), &[(1, 8), (1, 2), (3, 8)]);
        let eq = corpus::equilateral_triangle();
        assert_eq!(eq.angles(), &[(1, 3); 3]);
        let l =
            RationalPolygon::from_ints(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(l.angles()[3], (3, 2));
        let bad = RationalPolygon::from_ints(&[(0, 0), (2, 0), (0, 1)]);
        assert_eq!(bad, Err(UnfoldError::AngleNotRational(1)));
        let cw = RationalPolygon::from_ints(&[(0, 0), (0, 1), (1, 0)]);
        assert_eq!(cw, Err(UnfoldError::NotCounterclockwise));
    }

    #[test]
    fn group_orders() {
        for (p, order) in [
            (corpus::unit_square_polygon(), 4),
            (corpus::triangle_pi8(), 16),
            (corpus::equilateral_triangle(), 6),
            (corpus::rectangle_polygon(1, 2), 4),
        ] {
            let g = reflection_group(&p).unwrap();
            assert_eq!(g.order(), order);
            assert_eq!(g.order(), p.expected_group_order());
        }
        assert_eq!(
            reflection_group_bounded(&corpus::triangle_pi8(), 10),
            Err(UnfoldError::GroupTooLarge(10))
        );
    }

    #[test]
    fn square_unfolds_to_four_squares() {
        let u = unfold(&corpus::unit_square_polygon()).unwrap();
        assert_eq!(u.copies(), 4);
        assert_eq!(u.surface.area(), AlgNum::from_int(4));
        assert_eq!(u.surface.genus(), 1);
        assert!(
            equivalent(&u.surface, &corpus::four_square_torus())
                .unwrap()
                .equivalent
        );
    }

    #[test]
    fn pi8_triangle_unfolds_to_octagon() {
        let p = corpus::triangle_pi8();
        let u = unfold(&p).unwrap();
        assert_eq!(u.copies(), 16);
        assert_eq!(u.surface.area(), p.area() * AlgNum::from_int(16));
        let st = u.surface.stratum();
        assert_eq!(st.orders, vec![2]);
        assert_eq!(st.genus, 2);
        assert!(
            equivalent(&u.surface, &corpus::regular_octagon_apothem1())
                .unwrap()
                .equivalent
        );
    }

    #[test]
    fn rectangle_and_triangle_unfoldings() {
        let u = unfold(&corpus::rectangle_polygon(1, 2)).unwrap();
        assert_eq!(u.surface.area(), AlgNum::from_int(8));
        assert_eq!(u.surface.stratum().orders, vec![0]);
        let e = unfold(&corpus::equilateral_triangle()).unwrap();
        assert_eq!(e.surface.genus(), 1);
        assert_eq!(
            e.surface.area(),
            corpus::equilateral_triangle().area() * AlgNum::from_int(6)
        );
    }

    #[test]
    fn folding_points() {
        let p = corpus::triangle_pi8();
        let u = unfold(&p).unwrap();
        let x = Vec2::new(AlgNum::from_ratio(3, 4), AlgNum::from_ratio(1, 8));
        for h in 0..u.copies() {
            let y = u.lift_point(&x, h);
            assert_eq!(u.fold_point(h, &y).unwrap(), (x.clone(), h));
            let c = u.lift_point(&p.centre(), h);
            assert_eq!(u.fold_point(h, &c).unwrap().0, p.centre());
        }
        let far = Vec2::from_i64(5, 5);
        assert_eq!(
            u.fold_point(0, &far),
            Err(UnfoldError::PointNotOnSurface(0))
        );
    }

    #[test]
    fn glued_edges_come_from_the_same_side() {
        let u = unfold(&corpus::triangle_pi8()).unwrap();
        for (a, b) in u.surface.pairs() {
            assert_eq!(
                u.original_edge(a.polygon, a.edge),
                u.original_edge(b.polygon, b.edge)
            );
        }
    }
}
