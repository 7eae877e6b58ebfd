//! Orientation, incircle and containment predicates over any [`Scalar`].
//! With exact scalars every answer is exact, degenerate cases included.

use crate::scalar::{Scalar, Vec2};

/// Sign of the turn `a -> b -> c`: 1 for counterclockwise, -1 clockwise, 0 collinear.
pub fn orient<S: Scalar>(a: &Vec2<S>, b: &Vec2<S>, c: &Vec2<S>) -> i8 {
    (b - a).cross(&(c - a)).signum()
}

/// Positive when `d` lies strictly inside the circle through the
/// counterclockwise triangle `a, b, c`; zero when the four points are co-circular.
pub fn incircle<S: Scalar>(a: &Vec2<S>, b: &Vec2<S>, c: &Vec2<S>, d: &Vec2<S>) -> i8 {
    let ad = a - d;
    let bd = b - d;
    let cd = c - d;
    let la = ad.norm2();
    let lb = bd.norm2();
    let lc = cd.norm2();
    let det = la * bd.cross(&cd) - lb * ad.cross(&cd) + lc * ad.cross(&bd);
    det.signum()
}

/// Twice the signed area of a polygon.
pub fn signed_area2<S: Scalar>(poly: &[Vec2<S>]) -> S {
    let n = poly.len();
    (0..n).fold(S::zero(), |acc, i| acc + poly[i].cross(&poly[(i + 1) % n]))
}

/// `p` on the closed segment `[a, b]`.
pub fn on_segment<S: Scalar>(p: &Vec2<S>, a: &Vec2<S>, b: &Vec2<S>) -> bool {
    if orient(a, b, p) != 0 {
        return false;
    }
    let ab = b - a;
    let ap = p - a;
    let t = ap.dot(&ab);
    t.signum() >= 0 && (ab.norm2() - t).signum() >= 0
}

/// `p` strictly between `a` and `b` on the segment.
pub fn on_open_segment<S: Scalar>(p: &Vec2<S>, a: &Vec2<S>, b: &Vec2<S>) -> bool {
    on_segment(p, a, b) && p != a && p != b
}

/// Closed segments `[p1, p2]` and `[q1, q2]` share at least one point.
pub fn segments_intersect<S: Scalar>(
    p1: &Vec2<S>,
    p2: &Vec2<S>,
    q1: &Vec2<S>,
    q2: &Vec2<S>,
) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    (d1 == 0 && on_segment(p1, q1, q2))
        || (d2 == 0 && on_segment(p2, q1, q2))
        || (d3 == 0 && on_segment(q1, p1, p2))
        || (d4 == 0 && on_segment(q2, p1, p2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Inside,
    Outside,
    /// On the given vertex.
    Vertex(usize),
    /// In the relative interior of the given edge (edge `i` joins vertex `i` to `i+1`).
    Edge(usize),
}

/// Locate a point relative to a simple polygon.
pub fn locate<S: Scalar>(p: &Vec2<S>, poly: &[Vec2<S>]) -> Location {
    let n = poly.len();
    for (i, v) in poly.iter().enumerate() {
        if v == p {
            return Location::Vertex(i);
        }
    }
    let mut winding = 0i32;
    for i in 0..n {
        let a = &poly[i];
        let b = &poly[(i + 1) % n];
        let o = orient(a, b, p);
        if o == 0 && on_segment(p, a, b) {
            return Location::Edge(i);
        }
        let a_le = a.y.cmp_to(&p.y) != std::cmp::Ordering::Greater;
        let b_le = b.y.cmp_to(&p.y) != std::cmp::Ordering::Greater;
        if a_le && !b_le && o > 0 {
            winding += 1;
        } else if !a_le && b_le && o < 0 {
            winding -= 1;
        }
    }
    if winding != 0 {
        Location::Inside
    } else {
        Location::Outside
    }
}

/// A polygon is simple when non-adjacent edges are disjoint and adjacent
/// edges meet only at their shared vertex.
pub fn is_simple<S: Scalar>(poly: &[Vec2<S>]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        let a1 = &poly[i];
        let a2 = &poly[(i + 1) % n];
        for j in (i + 1)..n {
            let b1 = &poly[j];
            let b2 = &poly[(j + 1) % n];
            let adjacent_next = j == i + 1;
            let adjacent_prev = i == 0 && j == n - 1;
            if adjacent_next || adjacent_prev {
                // Shared vertex is fine; overlap beyond it is a fold-back.
                let (shared, other_a, other_b) = if adjacent_next {
                    (a2, a1, b2)
                } else {
                    (a1, a2, b1)
                };
                if n == 3 {
                    if orient(a1, a2, b2) == 0 && orient(a1, a2, b1) == 0 {
                        return false;
                    }
                    continue;
                }
                if orient(shared, other_a, other_b) == 0
                    && (other_a - shared).dot(&(other_b - shared)).signum() > 0
                {
                    return false;
                }
                continue;
            }
            if segments_intersect(a1, a2, b1, b2) {
                return false;
            }
        }
    }
    true
}

/// Whether the open segment between vertices `i` and `j` of a simple
/// counterclockwise polygon lies in the polygon's interior.
pub fn is_diagonal<S: Scalar>(poly: &[Vec2<S>], i: usize, j: usize) -> bool {
    let n = poly.len();
    if i == j || (i + 1) % n == j || (j + 1) % n == i {
        return false;
    }
    let (a, b) = (&poly[i], &poly[j]);
    // Must leave `a` into the interior cone.
    if !in_cone(poly, i, b) || !in_cone(poly, j, a) {
        return false;
    }
    for k in 0..n {
        let k2 = (k + 1) % n;
        if k == i || k2 == i || k == j || k2 == j {
            // edges incident to the endpoints can still be touched by a collinear diagonal
            for q in [&poly[k], &poly[k2]] {
                if q != a && q != b && on_open_segment(q, a, b) {
                    return false;
                }
            }
            continue;
        }
        if segments_intersect(a, b, &poly[k], &poly[k2]) {
            return false;
        }
    }
    true
}

/// `target` lies strictly inside the interior angle at vertex `i`.
fn in_cone<S: Scalar>(poly: &[Vec2<S>], i: usize, target: &Vec2<S>) -> bool {
    let n = poly.len();
    let prev = &poly[(i + n - 1) % n];
    let cur = &poly[i];
    let next = &poly[(i + 1) % n];
    if orient(prev, cur, next) > 0 {
        // convex corner
        orient(cur, next, target) > 0 && orient(cur, target, prev) > 0
    } else {
        // reflex or straight corner: not in the exterior cone
        !(orient(cur, target, next) >= 0 && orient(cur, prev, target) >= 0)
    }
}

/// Ear-clipping triangulation of a simple counterclockwise polygon.
/// Returns vertex index triples in counterclockwise order. Deterministic:
/// the lowest-index valid ear is clipped first.
pub fn ear_clip<S: Scalar>(poly: &[Vec2<S>]) -> Vec<[usize; 3]> {
    let mut idx: Vec<usize> = (0..poly.len()).collect();
    let mut tris = Vec::with_capacity(poly.len().saturating_sub(2));
    while idx.len() > 3 {
        let m = idx.len();
        let mut clipped = false;
        for k in 0..m {
            let ip = idx[(k + m - 1) % m];
            let ic = idx[k];
            let inx = idx[(k + 1) % m];
            let (a, b, c) = (&poly[ip], &poly[ic], &poly[inx]);
            if orient(a, b, c) <= 0 {
                continue;
            }
            let blocked = idx.iter().any(|&o| {
                if o == ip || o == ic || o == inx {
                    return false;
                }
                let q = &poly[o];
                orient(a, b, q) >= 0 && orient(b, c, q) >= 0 && orient(c, a, q) >= 0
            });
            if blocked {
                continue;
            }
            tris.push([ip, ic, inx]);
            idx.remove(k);
            clipped = true;
            break;
        }
        assert!(clipped, "ear clipping stalled on a non-simple polygon");
    }
    tris.push([idx[0], idx[1], idx[2]]);
    tris
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algnum::AlgNum;

    fn pts(v: &[(i64, i64)]) -> Vec<Vec2<AlgNum>> {
        v.iter().map(|&(x, y)| Vec2::from_i64(x, y)).collect()
    }

    #[test]
    fn incircle_signs() {
        let p = pts(&[(0, 0), (1, 0), (1, 1), (0, 1), (2, 2), (1, 2)]);
        assert_eq!(incircle(&p[0], &p[1], &p[2], &p[3]), 0);
        assert_eq!(incircle(&p[0], &p[1], &p[2], &p[4]), -1);
        let inner = Vec2::new(AlgNum::from_ratio(1, 2), AlgNum::from_ratio(1, 2));
        assert_eq!(incircle(&p[0], &p[1], &p[2], &inner), 1);
    }

    #[test]
    fn simplicity() {
        assert!(is_simple(&pts(&[(0, 0), (1, 0), (1, 1), (0, 1)])));
        assert!(!is_simple(&pts(&[(0, 0), (1, 1), (1, 0), (0, 1)])));
        assert!(!is_simple(&pts(&[(0, 0), (2, 0), (1, 0), (1, 1)])));
        assert!(is_simple(&pts(&[(0, 0), (1, 0), (2, 0), (1, 1)])));
    }

    #[test]
    fn ear_clipping_counts() {
        let l = pts(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]);
        let t = ear_clip(&l);
        assert_eq!(t.len(), 4);
        let area: AlgNum = t
            .iter()
            .map(|tri| signed_area2(&[l[tri[0]].clone(), l[tri[1]].clone(), l[tri[2]].clone()]))
            .fold(AlgNum::zero(), |a, b| a + b);
        assert_eq!(area, signed_area2(&l));
    }

    #[test]
    fn locate_points() {
        let sq = pts(&[(0, 0), (2, 0), (2, 2), (0, 2)]);
        assert_eq!(locate(&Vec2::from_i64(1, 1), &sq), Location::Inside);
        assert_eq!(locate(&Vec2::from_i64(1, 0), &sq), Location::Edge(0));
        assert_eq!(locate(&Vec2::from_i64(2, 2), &sq), Location::Vertex(2));
        assert_eq!(locate(&Vec2::from_i64(3, 1), &sq), Location::Outside);
    }

    #[test]
    fn diagonals() {
        let l = pts(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]);
        assert!(is_diagonal(&l, 0, 3));
        assert!(!is_diagonal(&l, 2, 4));
        assert!(!is_diagonal(&l, 0, 1));
        // collinear through a vertex
        let c = pts(&[(0, 0), (1, 0), (2, 0), (2, 2), (0, 2)]);
        assert!(is_diagonal(&c, 1, 3));
        assert!(is_diagonal(&c, 1, 4));
    }
}
