//! Saddle connections up to a length bound, growth tables, and generalized
//! diagonals of rational billiards.
//!
//! The search develops triangles into the plane outward from each corner of
//! a triangulation, keeping the open wedge of directions not yet blocked by
//! a vertex. A wedge is dropped once the part of its crossing side inside
//! the wedge lies beyond the length bound; that test runs in floating point
//! with a safety margin, while everything deciding membership is exact in
//! exact mode.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use rayon::prelude::*;
use thiserror::Error;

use crate::algnum::AlgNum;
use crate::flow::{billiard_param, FlowError, FlowOptions, Termination, Trajectory};
use crate::moves::{self, Mesh};
use crate::scalar::{angle_cmp, Scalar, Vec2};
use crate::surface::TranslationSurface;
use crate::unfold::{unfold, RationalPolygon, UnfoldError};

/// Default cap on developed triangles per search.
pub const DEFAULT_NODE_BUDGET: usize = 200_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum CountError {
    #[error("length bound must be positive and finite")]
    BadLength,
    #[error("length list must be nonempty and increasing")]
    BadLengthList,
    #[error(
        "search budget of {budget} developed triangles exceeded; {found} connections found so far"
    )]
    BudgetExceeded { budget: usize, found: usize },
    #[error(transparent)]
    Unfold(#[from] UnfoldError),
    #[error(transparent)]
    Flow(#[from] FlowError),
}

/// A straight segment between two vertices with no vertex in its interior.
/// `source_turn` tells apart connections leaving a cone point of angle
/// `2πk` with the same holonomy on different sheets.
#[derive(Debug, Clone, PartialEq)]
pub struct SaddleConnection<S: Scalar = AlgNum> {
    pub holonomy: Vec2<S>,
    pub source: usize,
    pub target: usize,
    pub source_turn: u32,
    /// Triangles crossed, starting with the one at the source corner.
    pub path: Vec<usize>,
}

impl<S: Scalar> SaddleConnection<S> {
    pub fn length(&self) -> f64 {
        self.holonomy.length_f64()
    }
}

/// Canonical order: by length, then holonomy, then endpoints.
pub fn cmp_connections<S: Scalar>(a: &SaddleConnection<S>, b: &SaddleConnection<S>) -> Ordering {
    a.holonomy
        .norm2()
        .cmp_to(&b.holonomy.norm2())
        .then_with(|| a.holonomy.lex_cmp(&b.holonomy))
        .then_with(|| (a.source, a.source_turn, a.target).cmp(&(b.source, b.source_turn, b.target)))
}

struct Frame<S: Scalar> {
    tri: usize,
    side: usize,
    p: Vec2<S>,
    q: Vec2<S>,
    lo: Vec2<S>,
    hi: Vec2<S>,
    node: usize,
}

/// Sheet index of every corner: corners are walked counterclockwise around
/// their vertex from a reference corner, and the index goes up each time
/// the outgoing side passes the reference direction again.
fn corner_turns<S: Scalar>(mesh: &Mesh<S>) -> (Vec<[u32; 3]>, Vec<Option<Vec2<S>>>) {
    let mut turns = vec![[0u32; 3]; mesh.len()];
    let mut reference = vec![None; mesh.class_count()];
    for (c, r) in reference.iter_mut().enumerate() {
        let corners = mesh.corners_ccw(c);
        let Some(&(t0, k0)) = corners.first() else {
            continue;
        };
        let refv = mesh.edge(t0, k0).clone();
        let mut turn = 0;
        let mut prev = refv.clone();
        for (idx, &(t, k)) in corners.iter().enumerate() {
            let out = mesh.edge(t, k);
            if idx > 0 && angle_cmp(&refv, out, &prev) != Ordering::Greater {
                turn += 1;
            }
            turns[t][k] = turn;
            prev = out.clone();
        }
        *r = Some(refv);
    }
    (turns, reference)
}

/// Distance from the origin to the part of segment `pq` inside the wedge
/// between directions `lo` and `hi`, in floating point.
fn wedge_distance(p: &Vec2<f64>, q: &Vec2<f64>, lo: &Vec2<f64>, hi: &Vec2<f64>) -> f64 {
    let d = q - p;
    // cross(lo, p + τd) >= 0 and cross(p + τd, hi) >= 0
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for (c0, c1) in [(lo.cross(p), lo.cross(&d)), (p.cross(hi), d.cross(hi))] {
        if c1.abs() < 1e-300 {
            continue;
        }
        let r = -c0 / c1;
        if c1 > 0.0 {
            t0 = t0.max(r);
        } else {
            t1 = t1.min(r);
        }
    }
    if t0 > t1 {
        // Rounding squeezed the interval empty; fall back to the whole side.
        t0 = 0.0;
        t1 = 1.0;
    }
    let dd = d.norm2();
    let t = if dd > 0.0 {
        (-p.dot(&d) / dd).clamp(t0, t1)
    } else {
        t0
    };
    (p + &d.scale(&t)).length_f64()
}

struct Search<'a, S: Scalar> {
    mesh: &'a Mesh<S>,
    turns: Vec<[u32; 3]>,
    refs: Vec<Option<Vec2<S>>>,
    l2: S,
    l: f64,
    budget: usize,
    nodes: AtomicUsize,
}

impl<S: Scalar> Search<'_, S> {
    fn seed(&self, t: usize, i: usize) -> Result<Vec<SaddleConnection<S>>, usize> {
        let m = self.mesh;
        let mut out = Vec::new();
        let source = m.class(t, i);
        let out_edge = m.edge(t, i).clone();
        let turn0 = self.turns[t][i];
        let refv = self.refs[source]
            .clone()
            .expect("corner class has a reference");
        let turn_of = |d: &Vec2<S>| {
            if angle_cmp(&refv, d, &out_edge) == Ordering::Less {
                turn0 + 1
            } else {
                turn0
            }
        };
        // parents[n] = (triangle, parent node)
        let mut parents: Vec<(usize, usize)> = vec![(t, usize::MAX)];
        let path_of = |parents: &[(usize, usize)], mut n: usize| {
            let mut path = Vec::new();
            while n != usize::MAX {
                path.push(parents[n].0);
                n = parents[n].1;
            }
            path.reverse();
            path
        };
        let b = out_edge.clone();
        let c = &b + m.edge(t, i + 1);
        if (b.norm2() - self.l2.clone()).signum() <= 0 {
            out.push(SaddleConnection {
                holonomy: b.clone(),
                source,
                target: m.class(t, i + 1),
                source_turn: turn0,
                path: vec![t],
            });
        }
        let mut stack = vec![Frame {
            tri: t,
            side: (i + 1) % 3,
            p: b.clone(),
            q: c.clone(),
            lo: b,
            hi: c,
            node: 0,
        }];
        let mut local = 0usize;
        while let Some(f) = stack.pop() {
            local += 1;
            if local % 1024 == 0
                && self.nodes.fetch_add(1024, AtomicOrdering::Relaxed) + 1024 > self.budget
            {
                return Err(out.len());
            }
            let (pf, qf, lof, hif) = (f.p.to_f64(), f.q.to_f64(), f.lo.to_f64(), f.hi.to_f64());
            if wedge_distance(&pf, &qf, &lof, &hif) > self.l * (1.0 + 1e-9) + 1e-12 {
                continue;
            }
            let (u, j) = m.neighbor(f.tri, f.side);
            let d = &f.p + m.edge(u, j + 1);
            parents.push((u, f.node));
            let node = parents.len() - 1;
            let after_lo = f.lo.cross(&d).signum() > 0;
            let before_hi = d.cross(&f.hi).signum() > 0;
            if after_lo && before_hi {
                if (d.norm2() - self.l2.clone()).signum() <= 0 {
                    out.push(SaddleConnection {
                        holonomy: d.clone(),
                        source,
                        target: m.class(u, j + 2),
                        source_turn: turn_of(&d),
                        path: path_of(&parents, node),
                    });
                }
                stack.push(Frame {
                    tri: u,
                    side: (j + 1) % 3,
                    p: f.p.clone(),
                    q: d.clone(),
                    lo: f.lo.clone(),
                    hi: d.clone(),
                    node,
                });
                stack.push(Frame {
                    tri: u,
                    side: (j + 2) % 3,
                    p: d.clone(),
                    q: f.q,
                    lo: d,
                    hi: f.hi,
                    node,
                });
            } else if !after_lo {
                stack.push(Frame {
                    tri: u,
                    side: (j + 2) % 3,
                    p: d,
                    q: f.q,
                    lo: f.lo,
                    hi: f.hi,
                    node,
                });
            } else {
                stack.push(Frame {
                    tri: u,
                    side: (j + 1) % 3,
                    p: f.p,
                    q: d,
                    lo: f.lo,
                    hi: f.hi,
                    node,
                });
            }
        }
        self.nodes.fetch_add(local % 1024, AtomicOrdering::Relaxed);
        Ok(out)
    }
}

/// Every saddle connection of length at most `l` on a triangulated surface,
/// in canonical order. Each connection appears once per source sheet, so
/// the list is closed under reversal.
pub fn saddle_connections_mesh<S: Scalar>(
    mesh: &Mesh<S>,
    l: f64,
    budget: usize,
) -> Result<Vec<SaddleConnection<S>>, CountError> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(CountError::BadLength);
    }
    let lv = S::from_f64(l);
    let (turns, refs) = corner_turns(mesh);
    let search = Search {
        mesh,
        turns,
        refs,
        l2: lv.clone() * lv,
        l,
        budget,
        nodes: AtomicUsize::new(0),
    };
    let seeds: Vec<(usize, usize)> = (0..mesh.len())
        .flat_map(|t| (0..3).map(move |k| (t, k)))
        .collect();
    let results: Vec<Result<Vec<SaddleConnection<S>>, usize>> =
        seeds.par_iter().map(|&(t, k)| search.seed(t, k)).collect();
    let mut all = Vec::new();
    let mut failed = false;
    let mut partial = 0;
    for r in results {
        match r {
            Ok(v) => all.extend(v),
            Err(found) => {
                failed = true;
                partial += found;
            }
        }
    }
    if failed {
        return Err(CountError::BudgetExceeded {
            budget,
            found: all.len() + partial,
        });
    }
    all.sort_by(cmp_connections);
    Ok(all)
}

/// Saddle connections of an exact surface, searched on its Delaunay
/// triangulation.
pub fn saddle_connections(
    s: &TranslationSurface,
    l: f64,
) -> Result<Vec<SaddleConnection>, CountError> {
    let tri = moves::delaunay(s);
    saddle_connections_mesh(&tri.mesh, l, DEFAULT_NODE_BUDGET)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRow {
    pub l: f64,
    pub count: usize,
    pub ratio: f64,
    pub cesaro: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthTable {
    pub rows: Vec<GrowthRow>,
}

/// `N(L)`, `N(L)/L²` and the running average `(1/L)∫₀^L N(ℓ)/ℓ² dℓ`.
/// The integral is the trapezoid rule over the listed lengths, with the
/// first interval `[0, L₁]` taken at the constant value `N(L₁)/L₁²`.
pub fn growth_from_lengths(lengths2: &[f64], ls: &[f64]) -> Result<GrowthTable, CountError> {
    if ls.is_empty() || ls.windows(2).any(|w| w[0] >= w[1]) || ls[0] <= 0.0 {
        return Err(CountError::BadLengthList);
    }
    let mut sorted = lengths2.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut rows: Vec<GrowthRow> = Vec::with_capacity(ls.len());
    let mut integral = 0.0;
    for (i, &l) in ls.iter().enumerate() {
        let bound = l * l * (1.0 + 1e-12);
        let count = sorted.partition_point(|&x| x <= bound);
        let ratio = count as f64 / (l * l);
        integral += match i {
            0 => l * ratio,
            _ => (l - ls[i - 1]) * (ratio + rows[i - 1].ratio) / 2.0,
        };
        rows.push(GrowthRow {
            l,
            count,
            ratio,
            cesaro: integral / l,
        });
    }
    Ok(GrowthTable { rows })
}

/// Growth of the number of oriented saddle connections.
pub fn count_growth(s: &TranslationSurface, ls: &[f64]) -> Result<GrowthTable, CountError> {
    let max = ls.last().copied().ok_or(CountError::BadLengthList)?;
    let conns = saddle_connections(s, max)?;
    let lengths: Vec<f64> = conns.iter().map(|c| c.holonomy.norm2().to_f64()).collect();
    growth_from_lengths(&lengths, ls)
}

/// Corner-to-corner billiard paths in `P` of length at most `l`, each
/// unoriented path once.
///
/// Every path lifts to exactly one saddle connection of the unfolding that
/// leaves a corner of the identity copy inside that corner's sector. Those
/// lifts are folded back by running the exact billiard from the corner.
pub fn generalized_diagonals(
    p: &RationalPolygon,
    l: f64,
) -> Result<Vec<Trajectory<AlgNum>>, CountError> {
    let u = unfold(p)?;
    let conns = saddle_connections(&u.surface, l)?;
    let poly0 = u.surface.polygon(0);
    let n = poly0.len();
    let mut hols: Vec<Vec2<AlgNum>> = conns.into_iter().map(|c| c.holonomy).collect();
    hols.sort_by(|a, b| a.lex_cmp(b));
    hols.dedup();
    let mut out: Vec<Trajectory<AlgNum>> = Vec::new();
    let opts = FlowOptions::default();
    for h in &hols {
        for vertex in 0..n {
            let out_dir = poly0.edge_vector(vertex);
            let in_rev = -poly0.edge_vector((vertex + n - 1) % n);
            // closed sector: paths may run along either side of the corner
            if angle_cmp(&out_dir, h, &in_rev) == Ordering::Greater {
                continue;
            }
            // identity copy: polygon vertex = P vertex - centre
            let start = poly0.vertex(vertex) + &u.centre;
            let traj = billiard_param(p.vertices(), &start, h, AlgNum::one(), true, &opts)?;
            if matches!(traj.termination, Termination::VertexHit(_)) && traj.param == AlgNum::one()
            {
                out.push(traj);
            }
        }
    }
    // keep one of each path and its reverse
    let key = |t: &Trajectory<AlgNum>| -> Vec<Vec2<AlgNum>> {
        let mut pts: Vec<Vec2<AlgNum>> = t.segments.iter().map(|s| s.start.clone()).collect();
        if let Some(e) = t.end() {
            pts.push(e.clone());
        }
        pts
    };
    let cmp_pts = |a: &[Vec2<AlgNum>], b: &[Vec2<AlgNum>]| {
        for (x, y) in a.iter().zip(b) {
            let o = x.lex_cmp(y);
            if o != Ordering::Equal {
                return o;
            }
        }
        a.len().cmp(&b.len())
    };
    let mut keyed: Vec<(Vec<Vec2<AlgNum>>, Trajectory<AlgNum>)> = out
        .into_iter()
        .filter_map(|t| {
            let fwd = key(&t);
            let mut rev = fwd.clone();
            rev.reverse();
            (cmp_pts(&fwd, &rev) != Ordering::Greater).then_some((fwd, t))
        })
        .collect();
    keyed.sort_by(|a, b| {
        a.1.length2()
            .cmp_real(&b.1.length2())
            .then_with(|| cmp_pts(&a.0, &b.0))
    });
    keyed.dedup_by(|a, b| cmp_pts(&a.0, &b.0) == Ordering::Equal);
    Ok(keyed.into_iter().map(|(_, t)| t).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use num_integer::Integer;

    fn lattice_oracle(l: i64) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for x in -l..=l {
            for y in -l..=l {
                if (x, y) != (0, 0) && x.gcd(&y) == 1 && x * x + y * y <= l * l {
                    out.push((x, y));
                }
            }
        }
        out.sort();
        out
    }

    fn holonomies(conns: &[SaddleConnection]) -> Vec<(i64, i64)> {
        let mut v: Vec<(i64, i64)> = conns
            .iter()
            .map(|c| {
                let x = c.holonomy.x.to_integer().unwrap().try_into().unwrap();
                let y = c.holonomy.y.to_integer().unwrap().try_into().unwrap();
                (x, y)
            })
            .collect();
        v.sort();
        v
    }

    #[test]
    fn torus_small_radii() {
        let s = corpus::square_torus();
        assert_eq!(
            holonomies(&saddle_connections(&s, 1.0).unwrap()),
            lattice_oracle(1)
        );
        let c = saddle_connections(&s, 1.5).unwrap();
        assert_eq!(c.len(), 8);
        assert_eq!(
            holonomies(&saddle_connections(&s, 12.0).unwrap()),
            lattice_oracle(12)
        );
    }

    #[test]
    fn octagon_shortest() {
        let s = corpus::regular_octagon();
        let c = saddle_connections(&s, 1.0).unwrap();
        // the four glued sides, in both orientations
        assert!(c.iter().all(|x| x.holonomy.norm2() == AlgNum::one()));
        assert_eq!(c.len(), 8);
        let longer = saddle_connections(&s, 2.0).unwrap();
        for sc in &longer {
            assert!(longer.iter().any(|o| o.holonomy == -&sc.holonomy));
        }
    }

    #[test]
    fn growth_table_shape() {
        let s = corpus::square_torus();
        let ls: Vec<f64> = (1..=5).map(|k| 4.0 * k as f64).collect();
        let g = count_growth(&s, &ls).unwrap();
        assert!(g.rows.windows(2).all(|w| w[0].count <= w[1].count));
        assert_eq!(g.rows[0].count, lattice_oracle(4).len());
        assert_eq!(
            count_growth(&s, &[2.0, 1.0]),
            Err(CountError::BadLengthList)
        );
    }

    #[test]
    fn square_diagonals() {
        let sq = corpus::unit_square_polygon();
        let d = generalized_diagonals(&sq, 1.01).unwrap();
        assert_eq!(d.len(), 4);
        let d = generalized_diagonals(&sq, 2f64.sqrt() + 0.01).unwrap();
        assert_eq!(d.len(), 6);
        assert_eq!(
            d.iter()
                .filter(|t| t.length2() == AlgNum::from_int(2))
                .count(),
            2
        );
        assert!(d
            .iter()
            .all(|t| matches!(t.termination, Termination::VertexHit(_))));
    }

    #[test]
    fn budget_is_reported() {
        let s = corpus::square_torus();
        let tri = moves::delaunay(&s);
        let r = saddle_connections_mesh(&tri.mesh, 50.0, 2048);
        assert!(matches!(
            r,
            Err(CountError::BudgetExceeded { budget: 2048, .. })
        ));
    }
}
