use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use flatsurf::corpus;
use flatsurf::format::{emit_surface, parse_surface};
use flatsurf::gl2::{apply, FieldMatrix};
use flatsurf::moves::{canonicalize, cut, delaunay, glue, CutSpec};
use flatsurf::{AlgNum, EdgeRef, TranslationSurface};

fn element(level: u32, coeffs: Vec<(i64, i64)>) -> AlgNum {
    let c: Vec<BigRational> = coeffs
        .into_iter()
        .map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
        .collect();
    AlgNum::from_coeffs(level, &c)
}

fn arb_at(level: u32) -> impl Strategy<Value = AlgNum> {
    prop::collection::vec((-12i64..=12, 1i64..=6), level as usize)
        .prop_map(move |c| element(level, c))
}

fn arb_algnum() -> impl Strategy<Value = AlgNum> {
    (1u32..=16).prop_flat_map(arb_at)
}

/// Three elements sharing a level.
fn arb_triple() -> impl Strategy<Value = (AlgNum, AlgNum, AlgNum)> {
    (1u32..=16).prop_flat_map(|n| (arb_at(n), arb_at(n), arb_at(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn field_axioms((a, b, c) in arb_triple()) {
        let zero = AlgNum::zero();
        let one = AlgNum::one();
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &zero, a.clone());
        prop_assert_eq!(&a * &one, a.clone());
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), one);
        } else {
            prop_assert!(a.inv().is_err());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn mixed_levels(a in arb_algnum(), b in arb_algnum()) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        if !b.is_zero() {
            prop_assert_eq!(&(&a * &b) / &b, a.clone());
        }
    }

    #[test]
    fn conjugation(a in arb_algnum(), b in arb_algnum()) {
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert!((&a + &a.conj()).is_real());
    }

    #[test]
    fn real_sign(a in arb_algnum(), b in arb_algnum()) {
        let x = &a + &a.conj();
        let y = &b + &b.conj();
        let (sx, sy) = (x.sign().unwrap(), y.sign().unwrap());
        prop_assert_eq!((&x * &y).sign().unwrap(), sx * sy);
        prop_assert_eq!((-&x).sign().unwrap(), -sx);
        let f = x.to_f64();
        if f.abs() > 1e-9 {
            prop_assert_eq!(sx, if f > 0.0 { 1 } else { -1 });
        }
        prop_assert_eq!(sx == 0, x.is_zero());
    }

    #[test]
    fn text_round_trip(a in arb_algnum()) {
        let back: AlgNum = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }
}

fn invariants(s: &TranslationSurface) -> (AlgNum, Vec<u32>, Vec<u32>) {
    let mut angles: Vec<u32> = s
        .cone_points()
        .iter()
        .map(|c| c.angle_multiple)
        .filter(|&m| m > 1)
        .collect();
    angles.sort_unstable();
    (s.area(), angles, s.stratum().orders)
}

fn arb_surface() -> impl Strategy<Value = TranslationSurface> {
    let all = corpus::surfaces();
    (0..all.len()).prop_map(move |i| all[i].clone())
}

fn arb_sl2z() -> impl Strategy<Value = FieldMatrix> {
    // products of the two elementary shears
    prop::collection::vec((any::<bool>(), -2i64..=2), 0..4).prop_map(|steps| {
        steps
            .into_iter()
            .fold(FieldMatrix::identity(), |m, (upper, k)| {
                let e = if upper {
                    FieldMatrix::from_ints(1, k, 0, 1)
                } else {
                    FieldMatrix::from_ints(1, 0, k, 1)
                };
                &e.unwrap() * &m
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn delaunay_is_idempotent(s in arb_surface(), g in arb_sl2z()) {
        let s = apply(&g, &s);
        let t = delaunay(&s);
        prop_assert!(t.is_delaunay());
        let again = delaunay(&t.to_surface());
        prop_assert_eq!(again.flips, 0);
        prop_assert_eq!(again.to_surface(), t.to_surface());
        prop_assert_eq!(invariants(&t.to_surface()), invariants(&s));
        prop_assert!(canonicalize(&s).unwrap() == canonicalize(&t.to_surface()).unwrap());
    }

    #[test]
    fn cut_and_glue_preserve_invariants(
        s in arb_surface(),
        i in 0usize..10,
        j in 0usize..10,
        t in 1i64..8,
        u in 1i64..8,
    ) {
        let poly = s.polygon(0);
        let n = poly.len();
        let (i, j) = (i % n, j % n);
        prop_assume!(i != j);
        let on_edge = |k: usize, num: i64| {
            let a = poly.vertex(k);
            let d = poly.edge_vector(k).scale(&AlgNum::from_ratio(num, 8));
            a + &d
        };
        let spec = CutSpec { polygon: 0, start: on_edge(i, t), end: on_edge(j, u) };
        let Ok(c) = cut(&s, &spec) else {
            // a segment along the boundary is not a cut
            return Ok(());
        };
        prop_assert_eq!(c.polygons().len(), s.polygons().len() + 1);
        prop_assert_eq!(invariants(&c), invariants(&s));
        let last = c.polygon(0).len() - 1;
        let g = glue(&c, EdgeRef::new(0, last)).unwrap();
        prop_assert_eq!(g.polygons().len(), s.polygons().len());
        prop_assert_eq!(invariants(&g), invariants(&s));
    }

    #[test]
    fn surface_text_round_trip(s in arb_surface(), g in arb_sl2z()) {
        let s = apply(&g, &s);
        let text = emit_surface(&s);
        prop_assert_eq!(parse_surface(&text).unwrap(), s);
    }
}
