//! Small surfaces used throughout the tests, examples and CLI.

use crate::algnum::AlgNum;
use crate::scalar::{PlanarVec, Vec2};
use crate::surface::{EdgeRef, Polygon, TranslationSurface};
use crate::unfold::RationalPolygon;

fn e(p: usize, i: usize) -> EdgeRef {
    EdgeRef::new(p, i)
}

fn opposite_sides(poly: Polygon, name: &str) -> TranslationSurface {
    let n = poly.len();
    let pairs: Vec<_> = (0..n / 2).map(|i| (e(0, i), e(0, i + n / 2))).collect();
    TranslationSurface::new(vec![poly], &pairs)
        .expect("corpus surface")
        .with_name(name)
}

fn q(num: i64, den: i64) -> AlgNum {
    AlgNum::from_ratio(num, den)
}

fn pt(x: AlgNum, y: AlgNum) -> PlanarVec {
    Vec2::new(x, y)
}

/// Unit square with opposite sides identified.
pub fn square_torus() -> TranslationSurface {
    opposite_sides(
        Polygon::from_ints("A", &[(0, 0), (1, 0), (1, 1), (0, 1)]),
        "square torus",
    )
}

/// The unit square torus under `[[1, k], [0, 1]]`.
pub fn sheared_torus(k: i64) -> TranslationSurface {
    opposite_sides(
        Polygon::from_ints("A", &[(0, 0), (1, 0), (k + 1, 1), (k, 1)]),
        "sheared torus",
    )
}

/// The unit square torus rotated by 45 degrees.
pub fn rotated_torus() -> TranslationSurface {
    let h = AlgNum::sqrt2() / AlgNum::from_int(2);
    let z = AlgNum::zero();
    let poly = Polygon::new(
        "A",
        vec![
            pt(z.clone(), z.clone()),
            pt(h.clone(), h.clone()),
            pt(z, &h + &h),
            pt(-&h, h),
        ],
    );
    opposite_sides(poly, "rotated torus")
}

/// Four unit squares forming a 2 by 2 torus.
pub fn four_square_torus() -> TranslationSurface {
    let sq = |label: &str, x: i64, y: i64| {
        Polygon::from_ints(label, &[(x, y), (x + 1, y), (x + 1, y + 1), (x, y + 1)])
    };
    let polys = vec![sq("A", 0, 0), sq("B", 1, 0), sq("C", 0, 1), sq("D", 1, 1)];
    let pairs = [
        (e(0, 1), e(1, 3)),
        (e(1, 1), e(0, 3)),
        (e(2, 1), e(3, 3)),
        (e(3, 1), e(2, 3)),
        (e(0, 2), e(2, 0)),
        (e(2, 2), e(0, 0)),
        (e(1, 2), e(3, 0)),
        (e(3, 2), e(1, 0)),
    ];
    TranslationSurface::new(polys, &pairs)
        .expect("corpus surface")
        .with_name("2x2 torus")
}

/// Regular octagon of side 1 with opposite sides identified.
pub fn regular_octagon() -> TranslationSurface {
    let s = AlgNum::sqrt2() / AlgNum::from_int(2);
    let one = AlgNum::one();
    let z = AlgNum::zero();
    let verts = vec![
        pt(z.clone(), z.clone()),
        pt(one.clone(), z.clone()),
        pt(&one + &s, s.clone()),
        pt(&one + &s, &one + &s),
        pt(one.clone(), &one + &(&s + &s)),
        pt(z.clone(), &one + &(&s + &s)),
        pt(-&s, &one + &s),
        pt(-&s, s),
    ];
    opposite_sides(Polygon::new("A", verts), "regular octagon")
}

/// Regular octagon whose inscribed circle has radius 1, centred at the origin.
pub fn regular_octagon_apothem1() -> TranslationSurface {
    let t = AlgNum::sqrt2() - AlgNum::one();
    let one = AlgNum::one();
    let verts = vec![
        pt(-&t, -&one),
        pt(t.clone(), -&one),
        pt(one.clone(), -&t),
        pt(one.clone(), t.clone()),
        pt(t.clone(), one.clone()),
        pt(-&t, one.clone()),
        pt(-&one, t.clone()),
        pt(-&one, -&t),
    ];
    opposite_sides(Polygon::new("A", verts), "regular octagon")
}

/// Centrally symmetric decagon with edge vectors (1,0), (2,1), (1,1), (1,2),
/// (0,1) and their negatives, opposite sides identified. Two cone points of
/// angle 4π.
pub fn decagon_h11() -> TranslationSurface {
    opposite_sides(
        Polygon::from_ints(
            "A",
            &[
                (0, 0),
                (1, 0),
                (3, 1),
                (4, 2),
                (5, 4),
                (5, 5),
                (4, 5),
                (2, 4),
                (1, 3),
                (0, 1),
            ],
        ),
        "decagon",
    )
}

/// Four presentations of the square torus, each obtained from the previous
/// by one cut or glue: the square; the square cut along its vertical
/// midline; the two halves glued back along the original vertical sides;
/// and the parallelogram obtained by cutting along a diagonal and regluing.
pub fn fig3_chain() -> Vec<TranslationSurface> {
    let (h, one, z) = (q(1, 2), AlgNum::one(), AlgNum::zero());
    let right = Polygon::new(
        "A",
        vec![
            pt(h.clone(), z.clone()),
            pt(one.clone(), z.clone()),
            pt(one.clone(), one.clone()),
            pt(h.clone(), one.clone()),
        ],
    );
    let left = Polygon::new(
        "A'",
        vec![
            pt(h.clone(), one.clone()),
            pt(z.clone(), one.clone()),
            pt(z.clone(), z.clone()),
            pt(h.clone(), z.clone()),
        ],
    );
    let halves = TranslationSurface::new(
        vec![right, left],
        &[
            (e(0, 0), e(0, 2)),
            (e(1, 0), e(1, 2)),
            (e(0, 1), e(1, 1)),
            (e(0, 3), e(1, 3)),
        ],
    )
    .expect("corpus surface")
    .with_name("square torus");
    let three_h = q(3, 2);
    let shifted = Polygon::new(
        "A",
        vec![
            pt(one.clone(), one.clone()),
            pt(h.clone(), one.clone()),
            pt(h.clone(), z.clone()),
            pt(one.clone(), z.clone()),
            pt(three_h.clone(), z.clone()),
            pt(three_h, one.clone()),
        ],
    );
    let reglued = TranslationSurface::new(
        vec![shifted],
        &[(e(0, 1), e(0, 4)), (e(0, 2), e(0, 0)), (e(0, 3), e(0, 5))],
    )
    .expect("corpus surface")
    .with_name("square torus");
    vec![square_torus(), halves, reglued, sheared_torus(1)]
}

/// The unit square as a billiard table.
pub fn unit_square_polygon() -> RationalPolygon {
    rectangle_polygon(1, 1)
}

pub fn rectangle_polygon(w: i64, h: i64) -> RationalPolygon {
    RationalPolygon::from_ints(&[(0, 0), (w, 0), (w, h), (0, h)]).expect("corpus polygon")
}

/// Right triangle with angles π/8, π/2, 3π/8.
pub fn triangle_pi8() -> RationalPolygon {
    let t = AlgNum::sqrt2() - AlgNum::one();
    RationalPolygon::new(vec![
        Vec2::from_i64(0, 0),
        Vec2::from_i64(1, 0),
        pt(AlgNum::one(), t),
    ])
    .expect("corpus polygon")
}

pub fn equilateral_triangle() -> RationalPolygon {
    let h = AlgNum::sin_pi(1, 3);
    RationalPolygon::new(vec![
        Vec2::from_i64(0, 0),
        Vec2::from_i64(1, 0),
        pt(q(1, 2), h),
    ])
    .expect("corpus polygon")
}

/// Right triangle with angles π/5, π/2, 3π/10.
pub fn triangle_pi5() -> RationalPolygon {
    let t = AlgNum::sin_pi(1, 5) / AlgNum::cos_pi(1, 5);
    RationalPolygon::new(vec![
        Vec2::from_i64(0, 0),
        Vec2::from_i64(1, 0),
        pt(AlgNum::one(), t),
    ])
    .expect("corpus polygon")
}

/// Isosceles triangle with apex angle 2π/5 at the top.
pub fn triangle_2pi5() -> RationalPolygon {
    let t = AlgNum::sin_pi(3, 10) / AlgNum::cos_pi(3, 10);
    RationalPolygon::new(vec![
        Vec2::from_i64(0, 0),
        Vec2::from_i64(2, 0),
        pt(AlgNum::one(), t),
    ])
    .expect("corpus polygon")
}

/// L-shaped hexagon made of three unit squares.
pub fn l_shape_polygon() -> RationalPolygon {
    RationalPolygon::from_ints(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])
        .expect("corpus polygon")
}

/// Every billiard table in the corpus.
pub fn polygons() -> Vec<(&'static str, RationalPolygon)> {
    vec![
        ("square", unit_square_polygon()),
        ("rectangle-1x2", rectangle_polygon(1, 2)),
        ("triangle-pi8", triangle_pi8()),
        ("equilateral", equilateral_triangle()),
        ("triangle-pi5", triangle_pi5()),
        ("triangle-2pi5", triangle_2pi5()),
        ("l-shape", l_shape_polygon()),
    ]
}

/// Every translation surface in the corpus.
pub fn surfaces() -> Vec<TranslationSurface> {
    let mut out = vec![
        square_torus(),
        sheared_torus(1),
        rotated_torus(),
        four_square_torus(),
        regular_octagon(),
        regular_octagon_apothem1(),
        decagon_h11(),
    ];
    out.extend(fig3_chain().into_iter().skip(1).take(2));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::{cut, glue, CutSpec};

    #[test]
    fn chain_steps_are_single_moves() {
        let chain = fig3_chain();
        let spec = CutSpec {
            polygon: 0,
            start: pt(q(1, 2), AlgNum::zero()),
            end: pt(q(1, 2), AlgNum::one()),
        };
        assert_eq!(cut(&chain[0], &spec).unwrap(), chain[1]);
        assert_eq!(glue(&chain[1], e(0, 1)).unwrap(), chain[2]);
        let diag = CutSpec {
            polygon: 0,
            start: Vec2::from_i64(0, 0),
            end: Vec2::from_i64(1, 1),
        };
        let halves = cut(&chain[0], &diag).unwrap();
        // The upper triangle's left side is glued to the lower triangle's right side.
        let lower = halves.polygon_index("A").unwrap();
        let right_side = (0..3)
            .map(|i| e(lower, i))
            .find(|&r| halves.edge_vector(r) == Vec2::from_i64(0, 1))
            .unwrap();
        let para = glue(&halves, right_side).unwrap();
        assert_eq!(para.polygons().len(), 1);
        assert_eq!(para.polygon(0).len(), 4);
        assert_eq!(para.area(), AlgNum::one());
    }

    #[test]
    fn octagon_scalings_agree() {
        let a = regular_octagon();
        let b = regular_octagon_apothem1();
        // side of the apothem-1 octagon is 2(√2 - 1); areas scale by its square
        let side = AlgNum::from_int(2) * (AlgNum::sqrt2() - AlgNum::one());
        assert_eq!(b.area(), a.area() * side.clone() * side);
    }
}
