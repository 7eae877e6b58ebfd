//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! An [`AlgNum`] stores its value on the power basis `1, ζ, …, ζ^{φ(N)-1}`
//! with a common positive denominator. The embedding `ζ_N ↦ exp(2πi/N)` is
//! fixed; [`AlgNum::approx`] and [`AlgNum::sign`] evaluate through it.
//!
//! Mixed-level operands are lifted to the least common multiple of their
//! levels, so every value has a unique canonical form at each level.

mod field;
mod fixed;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::{BigInt, Sign as BigSign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use field::{cyclotomic_poly, totient};
use field::{field, lcm, Field};

/// Least common multiple of a collection of levels (1 for an empty one).
pub fn lcm_levels(levels: impl IntoIterator<Item = u32>) -> u32 {
    levels.into_iter().fold(1, lcm)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgNumError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("value is not real: {0}")]
    NotReal(String),
    #[error("cannot parse number: {0}")]
    Parse(String),
}

/// Complex approximation together with a bound on its distance to the exact value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Approx {
    pub re: f64,
    pub im: f64,
    /// Upper bound on `|approx - exact|` in each component.
    pub error: f64,
}

/// An element of `Q(ζ_N)`.
#[derive(Clone)]
pub struct AlgNum {
    field: Arc<Field>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl AlgNum {
    fn from_parts(field: Arc<Field>, mut num: Vec<BigInt>, mut den: BigInt) -> AlgNum {
        debug_assert_eq!(num.len(), field.degree);
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if num.iter().all(Zero::is_zero) {
            den = BigInt::one();
        } else if !g.is_one() {
            for c in num.iter_mut() {
                *c /= &g;
            }
            den /= &g;
        }
        AlgNum { field, num, den }
    }

    pub fn zero() -> AlgNum {
        AlgNum::from_int(0)
    }

    pub fn one() -> AlgNum {
        AlgNum::from_int(1)
    }

    pub fn from_int(n: i64) -> AlgNum {
        AlgNum::from_parts(field(1), vec![BigInt::from(n)], BigInt::one())
    }

    pub fn from_ratio(num: i64, den: i64) -> AlgNum {
        assert!(den != 0, "zero denominator");
        AlgNum::from_parts(field(1), vec![BigInt::from(num)], BigInt::from(den))
    }

    pub fn from_rational(r: &BigRational) -> AlgNum {
        AlgNum::from_parts(field(1), vec![r.numer().clone()], r.denom().clone())
    }

    /// The exact rational value of a finite float.
    pub fn from_f64(x: f64) -> AlgNum {
        let r = BigRational::from_float(x).expect("finite float");
        AlgNum::from_rational(&r)
    }

    /// Element of `Q(ζ_level)` from rational coordinates on the power basis.
    /// Coordinates beyond `φ(level)` are reduced modulo the cyclotomic polynomial.
    pub fn from_coeffs(level: u32, coeffs: &[BigRational]) -> AlgNum {
        let f = field(level);
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scaled: Vec<BigInt> = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let num = if scaled.len() <= f.degree {
            let mut v = scaled;
            v.resize(f.degree, BigInt::zero());
            v
        } else {
            // fold high powers through the period first
            let n = level as usize;
            let mut folded = vec![BigInt::zero(); n.max(f.degree)];
            for (k, c) in scaled.into_iter().enumerate() {
                folded[k % n] += c;
            }
            f.reduce(&folded)
        };
        AlgNum::from_parts(f, num, den)
    }

    /// A primitive `n`-th root of unity, `exp(2πi/n)` under the fixed embedding.
    pub fn zeta(n: u32) -> AlgNum {
        let f = field(n);
        let num = f.row(1).iter().map(|&c| BigInt::from(c)).collect();
        AlgNum::from_parts(f, num, BigInt::one())
    }

    /// `cos(pπ/q)` as an element of `Q(ζ_2q)`.
    pub fn cos_pi(p: i64, q: u32) -> AlgNum {
        let n = 2 * q as i64;
        let k = p.rem_euclid(n) as u32;
        let z = AlgNum::zeta(2 * q).pow(k as i64);
        (&z + &z.conj()) / &AlgNum::from_int(2)
    }

    /// `sin(pπ/q)`, computed as `cos((q - 2p)π / 2q)`.
    pub fn sin_pi(p: i64, q: u32) -> AlgNum {
        AlgNum::cos_pi(q as i64 - 2 * p, 2 * q)
    }

    /// `√2 = 2cos(π/4)`.
    pub fn sqrt2() -> AlgNum {
        let z = AlgNum::zeta(8);
        &z + &z.conj()
    }

    pub fn level(&self) -> u32 {
        self.field.level
    }

    /// Rational coordinates on the power basis of `Q(ζ_level)`, in lowest terms.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// True when the value lies in `Q` (only the constant coordinate is nonzero).
    pub fn is_rational(&self) -> bool {
        self.num.iter().skip(1).all(Zero::is_zero)
    }

    /// The rational value, if the element is rational.
    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    /// Integer value, if the element is a rational integer.
    pub fn to_integer(&self) -> Option<BigInt> {
        (self.is_rational() && self.den.is_one()).then(|| self.num[0].clone())
    }

    /// The same value expressed at a multiple of its level.
    pub fn lift(&self, level: u32) -> AlgNum {
        let from = self.field.level;
        if from == level {
            return self.clone();
        }
        assert!(
            level % from == 0,
            "cannot lift level {from} to non-multiple {level}"
        );
        let target = field(level);
        let step = (level / from) as usize;
        let mut out = vec![BigInt::zero(); target.degree];
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(target.row(i * step)) {
                if *r != 0 {
                    *o += c * *r;
                }
            }
        }
        AlgNum::from_parts(target, out, self.den.clone())
    }

    fn common(a: &AlgNum, b: &AlgNum) -> (AlgNum, AlgNum) {
        let l = lcm(a.level(), b.level());
        (a.lift(l), b.lift(l))
    }

    /// Complex conjugation, the automorphism `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> AlgNum {
        let f = &self.field;
        let n = f.level as usize;
        let mut out = vec![BigInt::zero(); f.degree];
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = f.row((n - i) % n);
            for (o, r) in out.iter_mut().zip(row) {
                if *r != 0 {
                    *o += c * *r;
                }
            }
        }
        AlgNum::from_parts(f.clone(), out, self.den.clone())
    }

    pub fn is_real(&self) -> bool {
        self.is_rational() || self.conj() == *self
    }

    pub fn inv(&self) -> Result<AlgNum, AlgNumError> {
        if self.is_zero() {
            return Err(AlgNumError::DivisionByZero);
        }
        let f = &self.field;
        let d = f.degree;
        if d == 1 {
            return Ok(AlgNum::from_parts(
                f.clone(),
                vec![self.den.clone()],
                self.num[0].clone(),
            ));
        }
        // Column j of the multiplication matrix is self * x^j.
        let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); d + 1]; d];
        let mut col = self.num.clone();
        for j in 0..d {
            for i in 0..d {
                m[i][j] = BigRational::from_integer(col[i].clone());
            }
            let mut shifted = vec![BigInt::zero(); d + 1];
            shifted[1..].clone_from_slice(&col);
            col = f.reduce(&shifted);
        }
        m[0][d] = BigRational::one();
        // Gauss-Jordan elimination.
        for c in 0..d {
            let p = (c..d)
                .find(|&r| !m[r][c].is_zero())
                .expect("nonzero field element has invertible multiplication matrix");
            m.swap(c, p);
            let pivot = m[c][c].clone();
            for v in m[c].iter_mut() {
                *v = &*v / &pivot;
            }
            for r in 0..d {
                if r != c && !m[r][c].is_zero() {
                    let factor = m[r][c].clone();
                    for k in c..=d {
                        let delta = &m[c][k] * &factor;
                        m[r][k] -= delta;
                    }
                }
            }
        }
        let sol: Vec<BigRational> = m
            .iter()
            .map(|row| &row[d] * BigRational::from_integer(self.den.clone()))
            .collect();
        Ok(AlgNum::from_coeffs(f.level, &sol))
    }

    pub fn checked_div(&self, other: &AlgNum) -> Result<AlgNum, AlgNumError> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> AlgNum {
        if e < 0 {
            return self.inv().expect("negative power of zero").pow(-e);
        }
        let mut base = self.clone();
        let mut acc = AlgNum::one().lift(self.level());
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Certified approximation of the complex value under the fixed embedding.
    pub fn approx(&self, bits: u32) -> Approx {
        let bits = bits.max(16);
        if self.is_rational() {
            let r = BigRational::new(self.num[0].clone(), self.den.clone());
            let v = r.to_f64().unwrap_or(f64::NAN);
            let back = BigRational::from_float(v);
            let error = match back {
                Some(b) if b == r => 0.0,
                _ => v.abs() * f64::EPSILON,
            };
            return Approx {
                re: v,
                im: 0.0,
                error,
            };
        }
        let l1: BigInt = self.num.iter().map(|c| c.abs()).sum();
        let p = bits + l1.bits() as u32 + 8;
        let p = p.max(field::BASE_PRECISION);
        let table = self.field.trig(p);
        let (re, im) = fixed_dot(&self.num, &table.entries);
        let scale = &self.den << p;
        let re_f = BigRational::new(re, scale.clone())
            .to_f64()
            .unwrap_or(f64::NAN);
        let im_f = BigRational::new(im, scale.clone())
            .to_f64()
            .unwrap_or(f64::NAN);
        let trunc = BigRational::new(l1, scale)
            .to_f64()
            .unwrap_or(f64::INFINITY);
        let error = trunc + (re_f.abs().max(im_f.abs())) * f64::EPSILON;
        Approx {
            re: re_f,
            im: im_f,
            error,
        }
    }

    /// Nearest double to the real part (no error certificate).
    pub fn to_f64(&self) -> f64 {
        if self.is_rational() {
            return BigRational::new(self.num[0].clone(), self.den.clone())
                .to_f64()
                .unwrap_or(f64::NAN);
        }
        self.approx(53).re
    }

    /// Exact sign of a real element.
    pub fn sign(&self) -> Result<i8, AlgNumError> {
        if !self.is_real() {
            return Err(AlgNumError::NotReal(self.to_string()));
        }
        Ok(self.sign_real())
    }

    /// Sign of the real part. Callers guarantee the value is real; for such
    /// values the result is exact.
    pub fn sign_real(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        if self.field.degree == 1 {
            return sign_of(&self.num[0]);
        }
        if let Some(s) = self.sign_fast() {
            return s;
        }
        let l1: BigInt = self.num.iter().map(|c| c.abs()).sum();
        let mut bits = field::BASE_PRECISION;
        loop {
            let table = self.field.trig(bits);
            let (re, _) = fixed_dot(&self.num, &table.entries);
            // each table entry is within 2^-bits, so |re - exact| <= l1 units
            if re.magnitude() > l1.magnitude() {
                return sign_of(&re);
            }
            bits *= 2;
        }
    }

    fn sign_fast(&self) -> Option<i8> {
        let mut acc: i128 = 0;
        let mut l1: i128 = 0;
        for (c, (cos, _)) in self.num.iter().zip(&self.field.trig60) {
            let c = c.to_i64()? as i128;
            acc = acc.checked_add(c.checked_mul(*cos as i128)?)?;
            l1 = l1.checked_add(c.abs())?;
        }
        if acc.abs() > l1 {
            Some(if acc > 0 { 1 } else { -1 })
        } else {
            None
        }
    }

    /// Order of two real values.
    pub fn cmp_real(&self, other: &AlgNum) -> Ordering {
        match (self - other).sign_real() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }

    pub fn abs_real(&self) -> AlgNum {
        if self.sign_real() < 0 {
            -self
        } else {
            self.clone()
        }
    }
}

fn sign_of(v: &BigInt) -> i8 {
    match v.sign() {
        BigSign::Plus => 1,
        BigSign::Minus => -1,
        BigSign::NoSign => 0,
    }
}

fn fixed_dot(num: &[BigInt], trig: &[(BigInt, BigInt)]) -> (BigInt, BigInt) {
    let mut re = BigInt::zero();
    let mut im = BigInt::zero();
    for (c, (cos, sin)) in num.iter().zip(trig) {
        if c.is_zero() {
            continue;
        }
        re += c * cos;
        im += c * sin;
    }
    (re, im)
}

impl PartialEq for AlgNum {
    fn eq(&self, other: &AlgNum) -> bool {
        if self.level() == other.level() {
            return self.den == other.den && self.num == other.num;
        }
        if self.is_rational() && other.is_rational() {
            return self.den == other.den && self.num[0] == other.num[0];
        }
        let (a, b) = AlgNum::common(self, other);
        a.den == b.den && a.num == b.num
    }
}

impl Eq for AlgNum {}

impl fmt::Debug for AlgNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (≈{})", self.to_f64())
    }
}

/// Textual form `{level, [c0, c1, …]}` with each coordinate `n` or `n/d`.
impl fmt::Display for AlgNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, [", self.level())?;
        for (i, c) in self.coeffs().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]}}")
    }
}

impl FromStr for AlgNum {
    type Err = AlgNumError;

    fn from_str(s: &str) -> Result<AlgNum, AlgNumError> {
        let err = || AlgNumError::Parse(s.to_string());
        let t = s.trim();
        if !t.starts_with('{') {
            // bare rational shorthand
            let r: BigRational = t.parse().map_err(|_| err())?;
            return Ok(AlgNum::from_rational(&r));
        }
        let inner = t
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(err)?;
        let (lvl, rest) = inner.split_once(',').ok_or_else(err)?;
        let level: u32 = lvl.trim().parse().map_err(|_| err())?;
        if level == 0 {
            return Err(err());
        }
        let list = rest
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(err)?;
        let coeffs = list
            .split(',')
            .map(|c| c.trim())
            .filter(|c| !c.is_empty())
            .map(|c| c.parse::<BigRational>().map_err(|_| err()))
            .collect::<Result<Vec<_>, _>>()?;
        if coeffs.len() as u64 > totient(level as u64) {
            return Err(err());
        }
        Ok(AlgNum::from_coeffs(level, &coeffs))
    }
}

fn add_sub(a: &AlgNum, b: &AlgNum, negate: bool) -> AlgNum {
    if a.level() != b.level() {
        let (x, y) = AlgNum::common(a, b);
        return add_sub(&x, &y, negate);
    }
    let num = a
        .num
        .iter()
        .zip(&b.num)
        .map(|(x, y)| {
            let l = x * &b.den;
            let r = y * &a.den;
            if negate {
                l - r
            } else {
                l + r
            }
        })
        .collect();
    AlgNum::from_parts(a.field.clone(), num, &a.den * &b.den)
}

fn mul(a: &AlgNum, b: &AlgNum) -> AlgNum {
    if a.level() != b.level() {
        if a.is_rational() {
            return scale(b, &a.num[0], &a.den);
        }
        if b.is_rational() {
            return scale(a, &b.num[0], &b.den);
        }
        let (x, y) = AlgNum::common(a, b);
        return mul(&x, &y);
    }
    let d = a.field.degree;
    if d == 1 {
        return AlgNum::from_parts(
            a.field.clone(),
            vec![&a.num[0] * &b.num[0]],
            &a.den * &b.den,
        );
    }
    let mut prod = vec![BigInt::zero(); 2 * d - 1];
    for (i, x) in a.num.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.num.iter().enumerate() {
            if !y.is_zero() {
                prod[i + j] += x * y;
            }
        }
    }
    AlgNum::from_parts(a.field.clone(), a.field.reduce(&prod), &a.den * &b.den)
}

fn scale(a: &AlgNum, n: &BigInt, d: &BigInt) -> AlgNum {
    AlgNum::from_parts(
        a.field.clone(),
        a.num.iter().map(|c| c * n).collect(),
        &a.den * d,
    )
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&AlgNum> for &AlgNum {
            type Output = AlgNum;
            fn $m(self, rhs: &AlgNum) -> AlgNum {
                let f: fn(&AlgNum, &AlgNum) -> AlgNum = $body;
                f(self, rhs)
            }
        }
        impl $tr<AlgNum> for AlgNum {
            type Output = AlgNum;
            fn $m(self, rhs: AlgNum) -> AlgNum {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&AlgNum> for AlgNum {
            type Output = AlgNum;
            fn $m(self, rhs: &AlgNum) -> AlgNum {
                (&self).$m(rhs)
            }
        }
        impl $tr<AlgNum> for &AlgNum {
            type Output = AlgNum;
            fn $m(self, rhs: AlgNum) -> AlgNum {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| add_sub(a, b, false));
binop!(Sub, sub, |a, b| add_sub(a, b, true));
binop!(Mul, mul, mul);
binop!(Div, div, |a, b| a
    .checked_div(b)
    .expect("AlgNum division by zero"));

impl Neg for &AlgNum {
    type Output = AlgNum;
    fn neg(self) -> AlgNum {
        AlgNum {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for AlgNum {
    type Output = AlgNum;
    fn neg(self) -> AlgNum {
        -&self
    }
}

impl From<i64> for AlgNum {
    fn from(n: i64) -> AlgNum {
        AlgNum::from_int(n)
    }
}

impl Default for AlgNum {
    fn default() -> AlgNum {
        AlgNum::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_cos(n: u32) -> AlgNum {
        let z = AlgNum::zeta(n);
        &z + &z.conj()
    }

    #[test]
    fn zeta_examples() {
        assert_eq!(AlgNum::zeta(1), AlgNum::one());
        assert_eq!(&AlgNum::zeta(4) * &AlgNum::zeta(4), AlgNum::from_int(-1));
        assert_eq!(AlgNum::zeta(8).pow(8), AlgNum::one());
        assert_eq!(AlgNum::zeta(8).pow(4), AlgNum::from_int(-1));
    }

    #[test]
    fn zeta_is_primitive() {
        for n in 1..=24u32 {
            let z = AlgNum::zeta(n);
            assert_eq!(z.pow(n as i64), AlgNum::one(), "n = {n}");
            for m in 1..n {
                assert_ne!(z.pow(m as i64), AlgNum::one(), "n = {n}, m = {m}");
            }
        }
    }

    #[test]
    fn field_op_examples() {
        let x = two_cos(8);
        assert_eq!(&x * &x, AlgNum::from_int(2));
        let y = two_cos(16);
        assert_eq!(&(&y * &y) - &AlgNum::from_int(2), x);
        assert_eq!(&AlgNum::zeta(4) / &AlgNum::zeta(4), AlgNum::one());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            AlgNum::one().checked_div(&AlgNum::zero()),
            Err(AlgNumError::DivisionByZero)
        );
        assert_eq!(
            AlgNum::zero().lift(8).inv(),
            Err(AlgNumError::DivisionByZero)
        );
    }

    #[test]
    fn sign_examples() {
        assert_eq!(AlgNum::zero().sign(), Ok(0));
        let x = two_cos(8);
        assert_eq!((&x - &AlgNum::one()).sign(), Ok(1));
        let y = two_cos(16);
        assert_eq!((&(&y * &y) - &AlgNum::from_int(4)).sign(), Ok(-1));
        assert!(matches!(
            AlgNum::zeta(8).sign(),
            Err(AlgNumError::NotReal(_))
        ));
    }

    #[test]
    fn sign_of_tiny_difference_needs_refinement() {
        // (√2 - 1)^60 is about 1e-23; far below the fast path's resolution.
        let s = &two_cos(8) - &AlgNum::one();
        let tiny = s.pow(60);
        assert_eq!(tiny.sign_real(), 1);
        assert_eq!((-&tiny).sign_real(), -1);
        let shifted = &(&tiny + &AlgNum::from_int(3)) - &AlgNum::from_int(3);
        assert_eq!(shifted.sign_real(), 1);
    }

    #[test]
    fn approx_examples() {
        let a = AlgNum::one().approx(53);
        assert_eq!((a.re, a.im, a.error), (1.0, 0.0, 0.0));
        let i = AlgNum::zeta(4).approx(53);
        assert!(i.re.abs() <= 2f64.powi(-50) && (i.im - 1.0).abs() <= 2f64.powi(-50));
        let r2 = two_cos(8).approx(53);
        assert!((r2.re - std::f64::consts::SQRT_2).abs() <= 2f64.powi(-50));
        assert!(r2.error <= 2f64.powi(-50));
    }

    #[test]
    fn mixed_levels_lift_to_lcm() {
        let a = AlgNum::zeta(4);
        let b = AlgNum::zeta(6);
        let c = &a * &b;
        assert_eq!(c.level(), 12);
        assert_eq!(c, AlgNum::zeta(12).pow(5));
        // ζ_3 is ζ_6^2
        assert_eq!(AlgNum::zeta(3), AlgNum::zeta(6).pow(2));
    }

    #[test]
    fn trig_constructors() {
        assert_eq!(AlgNum::cos_pi(1, 3), AlgNum::from_ratio(1, 2));
        assert_eq!(AlgNum::sin_pi(1, 6), AlgNum::from_ratio(1, 2));
        assert_eq!(
            AlgNum::cos_pi(1, 4),
            &AlgNum::sqrt2() / &AlgNum::from_int(2)
        );
        let s = AlgNum::sin_pi(1, 8);
        let c = AlgNum::cos_pi(1, 8);
        assert_eq!(&(&s * &s) + &(&c * &c), AlgNum::one());
        assert!((s.to_f64() - (std::f64::consts::PI / 8.0).sin()).abs() < 1e-15);
    }

    #[test]
    fn text_round_trip() {
        let v = &two_cos(16) / &AlgNum::from_int(3);
        let s = v.to_string();
        assert_eq!(s.parse::<AlgNum>().unwrap(), v);
        assert_eq!(
            "{1, [3/4]}".parse::<AlgNum>().unwrap(),
            AlgNum::from_ratio(3, 4)
        );
        assert_eq!(
            "-5/10".parse::<AlgNum>().unwrap(),
            AlgNum::from_ratio(-1, 2)
        );
        assert!("{8, [1, 2, 3, 4, 5]}".parse::<AlgNum>().is_err());
        assert!("{0, []}".parse::<AlgNum>().is_err());
    }
}
