//! The linear action on surfaces: exact for matrices with entries in the
//! coordinate field, and a floating-point shadow for the diagonal flow
//! `g_t = diag(e^t, e^-t)`, whose entries are transcendental.

use std::fmt;
use std::ops::Mul;

use rayon::prelude::*;
use thiserror::Error;

use crate::algnum::AlgNum;
use crate::count::{self, CountError, SaddleConnection};
use crate::flow::FlatPolygons;
use crate::moves::{self, Mesh};
use crate::scalar::{PlanarVec, Scalar, Vec2};
use crate::surface::{EdgeRef, Polygon, TranslationSurface};

#[derive(Debug, Error, PartialEq)]
pub enum Gl2Error {
    #[error("matrix is singular")]
    Singular,
    #[error("matrix entries must be real")]
    NonReal,
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error("t = {0} overflows double precision")]
    Overflow(f64),
    #[error("time step must be positive, got {0}")]
    BadStep(f64),
    #[error("t_max must be non-negative and finite, got {0}")]
    BadHorizon(f64),
    #[error(transparent)]
    Count(#[from] CountError),
}

/// A 2×2 matrix `[[a, b], [c, d]]` with real entries in a cyclotomic field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    pub a: AlgNum,
    pub b: AlgNum,
    pub c: AlgNum,
    pub d: AlgNum,
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{:.6}, {:.6}], [{:.6}, {:.6}]]",
            self.a.to_f64(),
            self.b.to_f64(),
            self.c.to_f64(),
            self.d.to_f64()
        )
    }
}

impl FieldMatrix {
    pub fn new(a: AlgNum, b: AlgNum, c: AlgNum, d: AlgNum) -> Result<FieldMatrix, Gl2Error> {
        if ![&a, &b, &c, &d].iter().all(|x| x.is_real()) {
            return Err(Gl2Error::NonReal);
        }
        let m = FieldMatrix { a, b, c, d };
        if m.det().is_zero() {
            return Err(Gl2Error::Singular);
        }
        Ok(m)
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<FieldMatrix, Gl2Error> {
        FieldMatrix::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> FieldMatrix {
        FieldMatrix {
            a: AlgNum::one(),
            b: AlgNum::zero(),
            c: AlgNum::zero(),
            d: AlgNum::one(),
        }
    }

    /// Rotation by `pπ/q`.
    pub fn rotation(p: i64, q: u32) -> FieldMatrix {
        let (c, s) = (AlgNum::cos_pi(p, q), AlgNum::sin_pi(p, q));
        FieldMatrix {
            a: c.clone(),
            b: -&s,
            c: s,
            d: c,
        }
    }

    /// The derivative of the reflection in a line parallel to `v`.
    pub fn reflection(v: &PlanarVec) -> FieldMatrix {
        let n = v.norm2();
        let xx = &v.x * &v.x;
        let yy = &v.y * &v.y;
        let xy = &(&v.x * &v.y) * &AlgNum::from_int(2);
        let diag = &(&xx - &yy) / &n;
        let off = &xy / &n;
        FieldMatrix {
            a: diag.clone(),
            b: off.clone(),
            c: off,
            d: -diag,
        }
    }

    pub fn det(&self) -> AlgNum {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn transpose(&self) -> FieldMatrix {
        FieldMatrix {
            a: self.a.clone(),
            b: self.c.clone(),
            c: self.b.clone(),
            d: self.d.clone(),
        }
    }

    pub fn inverse(&self) -> FieldMatrix {
        let det = self.det();
        FieldMatrix {
            a: &self.d / &det,
            b: -(&self.b / &det),
            c: -(&self.c / &det),
            d: &self.a / &det,
        }
    }

    pub fn apply(&self, v: &PlanarVec) -> PlanarVec {
        Vec2::new(
            &self.a * &v.x + &self.b * &v.y,
            &self.c * &v.x + &self.d * &v.y,
        )
    }

    pub fn level(&self) -> u32 {
        crate::algnum::lcm_levels([&self.a, &self.b, &self.c, &self.d].map(|x| x.level()))
    }

    pub fn to_f64(&self) -> [f64; 4] {
        [
            self.a.to_f64(),
            self.b.to_f64(),
            self.c.to_f64(),
            self.d.to_f64(),
        ]
    }
}

impl Mul for &FieldMatrix {
    type Output = FieldMatrix;
    fn mul(self, o: &FieldMatrix) -> FieldMatrix {
        FieldMatrix {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }
}

/// Rebuild a polygon under a linear map. A map reversing orientation also
/// reverses the vertex order so the image stays counterclockwise; edge `k`
/// of the source then becomes edge `(-k-1) mod n` of the image.
pub(crate) fn map_polygon(
    poly: &Polygon,
    label: String,
    reverses: bool,
    f: impl Fn(&PlanarVec) -> PlanarVec,
) -> Polygon {
    let n = poly.len();
    let verts = (0..n)
        .map(|m| {
            let src = if reverses { (n - m) % n } else { m };
            f(poly.vertex(src))
        })
        .collect();
    Polygon::new(label, verts)
}

pub(crate) fn mapped_edge(n: usize, k: usize, reverses: bool) -> usize {
    if reverses {
        (2 * n - k - 1) % n
    } else {
        k
    }
}

/// The image of a surface under `g`: vertices move linearly, identifications
/// are kept.
pub fn apply(g: &FieldMatrix, s: &TranslationSurface) -> TranslationSurface {
    let reverses = g.det().sign_real() < 0;
    let polys: Vec<Polygon> = s
        .polygons()
        .iter()
        .map(|p| map_polygon(p, p.label.clone(), reverses, |v| g.apply(v)))
        .collect();
    let remap = |e: EdgeRef| {
        EdgeRef::new(
            e.polygon,
            mapped_edge(s.polygon(e.polygon).len(), e.edge, reverses),
        )
    };
    let pairs: Vec<_> = s
        .pairs()
        .into_iter()
        .map(|(x, y)| (remap(x), remap(y)))
        .collect();
    let mut out =
        TranslationSurface::new(polys, &pairs).expect("linear images of surfaces are surfaces");
    out.name = s.name.clone();
    out
}

/// A surface with floating-point coordinates: its polygons and pairing for
/// flows, and a Delaunay triangulation for saddle connection searches.
#[derive(Debug, Clone)]
pub struct FloatSurface {
    pub polygons: FlatPolygons<f64>,
    pub mesh: Mesh<f64>,
    pub eps: f64,
}

/// Flip cap for re-triangulating a float mesh after a linear map.
const FLOAT_FLIP_CAP: usize = 1_000_000;

impl FloatSurface {
    /// Largest `|u + v|` over glued edges `u`, `v`.
    pub fn pairing_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (p, poly) in self.polygons.polygons.iter().enumerate() {
            for i in 0..poly.len() {
                let f = self.polygons.partner[p][i];
                let q = &self.polygons.polygons[f.polygon];
                let u = &poly[(i + 1) % poly.len()] - &poly[i];
                let v = &q[(f.edge + 1) % q.len()] - &q[f.edge];
                worst = worst.max((&u + &v).length_f64());
            }
        }
        worst
    }

    pub fn area(&self) -> f64 {
        self.polygons.area_f64()
    }

    /// The image under `[[a, b], [c, d]]`, which must have positive determinant.
    pub fn apply_matrix(&self, [a, b, c, d]: [f64; 4]) -> Result<FloatSurface, Gl2Error> {
        let det = a * d - b * c;
        if !(det > 0.0) || !det.is_finite() {
            return Err(Gl2Error::Singular);
        }
        let f = |v: &Vec2<f64>| Vec2::new(a * v.x + b * v.y, c * v.x + d * v.y);
        let polygons = FlatPolygons {
            polygons: self
                .polygons
                .polygons
                .iter()
                .map(|p| p.iter().map(f).collect())
                .collect(),
            partner: self.polygons.partner.clone(),
        };
        let mut mesh = self.mesh.map(f);
        mesh.make_delaunay(FLOAT_FLIP_CAP);
        Ok(FloatSurface {
            polygons,
            mesh,
            eps: self.eps,
        })
    }
}

/// Demote an exact surface to doubles.
pub fn to_float(s: &TranslationSurface, eps: f64) -> Result<FloatSurface, Gl2Error> {
    if !(eps > 0.0) {
        return Err(Gl2Error::BadTolerance);
    }
    let polygons = FlatPolygons::from_surface(s).to_f64();
    let mesh = moves::delaunay(s).mesh.map(|v| v.to_f64());
    Ok(FloatSurface {
        polygons,
        mesh,
        eps,
    })
}

/// `g_t = diag(e^t, e^-t)` applied to a float surface.
pub fn apply_gt(t: f64, s: &FloatSurface) -> Result<FloatSurface, Gl2Error> {
    let (up, down) = (t.exp(), (-t).exp());
    if !t.is_finite() || !up.is_normal() || !down.is_normal() {
        return Err(Gl2Error::Overflow(t));
    }
    s.apply_matrix([up, 0.0, 0.0, down])
}

/// Length and holonomy of a shortest saddle connection.
///
/// Some shortest connection is no longer than the shortest triangle side,
/// so one search at that radius finds it.
pub fn systole(s: &FloatSurface) -> Result<(f64, Vec2<f64>), Gl2Error> {
    let sc = shortest(&s.mesh)?;
    Ok((sc.length(), sc.holonomy))
}

/// Exact version of [`systole`]; the returned connection has the least
/// squared length, compared exactly.
pub fn systole_exact(s: &TranslationSurface) -> Result<SaddleConnection, Gl2Error> {
    shortest(&moves::delaunay(s).mesh)
}

fn shortest<S: Scalar>(mesh: &Mesh<S>) -> Result<SaddleConnection<S>, Gl2Error> {
    let l = (0..mesh.len())
        .flat_map(|t| (0..3).map(move |k| mesh.edge(t, k).length_f64()))
        .fold(f64::INFINITY, f64::min);
    let conns = count::saddle_connections_mesh(mesh, l * (1.0 + 1e-9), count::DEFAULT_NODE_BUDGET)?;
    Ok(conns
        .into_iter()
        .next()
        .expect("every side of the triangulation is a connection"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GtSample {
    pub t: f64,
    pub systole: f64,
    pub holonomy: Vec2<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GtDiagnostics {
    pub samples: Vec<GtSample>,
    /// Systole below [`DIVERGENCE_THRESHOLD`] and non-increasing over the
    /// last quarter of the samples.
    pub divergence_suspected: bool,
}

pub const DIVERGENCE_THRESHOLD: f64 = 1e-3;

/// Sample the systole along `g_t(S)` for `t = 0, dt, 2dt, …, t_max`.
pub fn gt_orbit_diagnostics(
    s: &FloatSurface,
    t_max: f64,
    dt: f64,
) -> Result<GtDiagnostics, Gl2Error> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Gl2Error::BadStep(dt));
    }
    if !(t_max >= 0.0) || !t_max.is_finite() {
        return Err(Gl2Error::BadHorizon(t_max));
    }
    let steps = (t_max / dt + 1e-9).floor() as usize;
    let samples = (0..=steps)
        .into_par_iter()
        .map(|k| {
            let t = k as f64 * dt;
            let (systole, holonomy) = systole(&apply_gt(t, s)?)?;
            Ok(GtSample {
                t,
                systole,
                holonomy,
            })
        })
        .collect::<Result<Vec<_>, Gl2Error>>()?;
    let tail = (samples.len() / 4).max(2).min(samples.len());
    let window = &samples[samples.len() - tail..];
    let divergence_suspected = window.len() >= 2
        && window.windows(2).all(|w| w[1].systole <= w[0].systole)
        && window
            .last()
            .is_some_and(|x| x.systole < DIVERGENCE_THRESHOLD);
    Ok(GtDiagnostics {
        samples,
        divergence_suspected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::moves::{canonicalize, equivalent};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn exact_action() {
        let s = corpus::regular_octagon();
        assert_eq!(apply(&FieldMatrix::identity(), &s), s);
        let g = FieldMatrix::new(
            AlgNum::from_int(2),
            AlgNum::one(),
            AlgNum::sqrt2(),
            AlgNum::from_int(3),
        )
        .unwrap();
        let det = g.det();
        assert_eq!(apply(&g, &s).area(), s.area() * det);
        let flip = FieldMatrix::from_ints(1, 0, 0, -1).unwrap();
        let m = apply(&flip, &s);
        assert_eq!(m.area(), s.area());
        assert_eq!(m.stratum(), s.stratum());
        let shear = FieldMatrix::from_ints(1, 1, 0, 1).unwrap();
        assert!(
            equivalent(
                &apply(&shear, &corpus::square_torus()),
                &corpus::square_torus()
            )
            .unwrap()
            .equivalent
        );
        assert_eq!(FieldMatrix::from_ints(1, 2, 2, 4), Err(Gl2Error::Singular));
    }

    #[test]
    fn action_composes() {
        let s = corpus::decagon_h11();
        let g = FieldMatrix::from_ints(1, 1, 0, 1).unwrap();
        let h = FieldMatrix::from_ints(2, 0, 1, 1).unwrap();
        let a = apply(&g, &apply(&h, &s));
        let b = apply(&(&g * &h), &s);
        assert_eq!(canonicalize(&a).unwrap(), canonicalize(&b).unwrap());
    }

    #[test]
    fn float_shadow() {
        let f = to_float(&corpus::square_torus(), 1e-9).unwrap();
        assert_eq!(f.polygons.polygons[0][2], Vec2::new(1.0, 1.0));
        let o = to_float(&corpus::regular_octagon(), 1e-9).unwrap();
        assert!(close(o.polygons.polygons[0][2].y, 0.5f64.sqrt(), 1e-12));
        assert!(o.pairing_residual() < 1e-10);
        assert_eq!(
            to_float(&corpus::square_torus(), 0.0).err(),
            Some(Gl2Error::BadTolerance)
        );
    }

    #[test]
    fn gt_composes_and_scales() {
        let f = to_float(&corpus::regular_octagon(), 1e-9).unwrap();
        let a = apply_gt(0.7, &apply_gt(0.4, &f).unwrap()).unwrap();
        let b = apply_gt(1.1, &f).unwrap();
        for (p, q) in a.polygons.polygons[0].iter().zip(&b.polygons.polygons[0]) {
            assert!((p - q).length_f64() < 1e-9);
        }
        assert!(matches!(apply_gt(1e6, &f), Err(Gl2Error::Overflow(_))));
    }

    #[test]
    fn systoles() {
        let torus = to_float(&corpus::square_torus(), 1e-9).unwrap();
        assert!(close(systole(&torus).unwrap().0, 1.0, 1e-12));
        for t in [0.5, 1.0, 3.0] {
            let (len, hol) = systole(&apply_gt(t, &torus).unwrap()).unwrap();
            assert!(close(len, (-t).exp(), 1e-12));
            assert!(hol.x.abs() < 1e-12);
        }
        let oct = systole_exact(&corpus::regular_octagon()).unwrap();
        assert_eq!(oct.holonomy.norm2(), AlgNum::one());
    }

    #[test]
    fn orbit_diagnostics() {
        let torus = to_float(&corpus::square_torus(), 1e-9).unwrap();
        let d = gt_orbit_diagnostics(&torus, 10.0, 0.5).unwrap();
        assert_eq!(d.samples.len(), 21);
        assert!(d.divergence_suspected);
        // slope of the vertical against the lattice is the golden ratio
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let (c, s) = (
            phi / (1.0 + phi * phi).sqrt(),
            1.0 / (1.0 + phi * phi).sqrt(),
        );
        let golden = torus.apply_matrix([c, -s, s, c]).unwrap();
        let g = gt_orbit_diagnostics(&golden, 5.0, 0.25).unwrap();
        assert!(!g.divergence_suspected);
        assert!(g.samples.iter().all(|x| x.systole > 0.3));
        assert_eq!(
            gt_orbit_diagnostics(&torus, 1.0, 0.0),
            Err(Gl2Error::BadStep(0.0))
        );
    }
}
