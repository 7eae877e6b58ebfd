//! Number types usable as planar coordinates, and the vector type built on them.
//!
//! [`AlgNum`] gives exact predicates; `f64` is the floating shadow used for
//! long flows and the `g_t` action.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::algnum::AlgNum;

pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True for exact number types; float code paths apply tolerances instead.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    /// Exact value of the float for exact types.
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    /// Sign of a real value: -1, 0 or 1.
    fn signum(&self) -> i8;

    fn is_zero(&self) -> bool {
        self.signum() == 0
    }

    fn cmp_to(&self, other: &Self) -> Ordering {
        match (self.clone() - other.clone()).signum() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }
}

impl Scalar for AlgNum {
    const EXACT: bool = true;

    fn zero() -> Self {
        AlgNum::zero()
    }
    fn one() -> Self {
        AlgNum::one()
    }
    fn from_i64(n: i64) -> Self {
        AlgNum::from_int(n)
    }
    fn from_f64(x: f64) -> Self {
        AlgNum::from_f64(x)
    }
    fn to_f64(&self) -> f64 {
        AlgNum::to_f64(self)
    }
    fn signum(&self) -> i8 {
        self.sign_real()
    }
    fn is_zero(&self) -> bool {
        AlgNum::is_zero(self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn signum(&self) -> i8 {
        if *self > 0.0 {
            1
        } else if *self < 0.0 {
            -1
        } else {
            0
        }
    }
}

/// A planar vector or point.
#[derive(Clone, PartialEq, Default)]
pub struct Vec2<S> {
    pub x: S,
    pub y: S,
}

/// Exact planar vector with real cyclotomic coordinates.
pub type PlanarVec = Vec2<AlgNum>;

impl<S: fmt::Debug> fmt::Debug for Vec2<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.x, self.y)
    }
}

impl<S: Scalar> Vec2<S> {
    pub fn new(x: S, y: S) -> Self {
        Vec2 { x, y }
    }

    pub fn zero() -> Self {
        Vec2::new(S::zero(), S::zero())
    }

    pub fn from_i64(x: i64, y: i64) -> Self {
        Vec2::new(S::from_i64(x), S::from_i64(y))
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn cross(&self, other: &Self) -> S {
        self.x.clone() * other.y.clone() - self.y.clone() * other.x.clone()
    }

    pub fn dot(&self, other: &Self) -> S {
        self.x.clone() * other.x.clone() + self.y.clone() * other.y.clone()
    }

    pub fn norm2(&self) -> S {
        self.dot(self)
    }

    pub fn scale(&self, s: &S) -> Self {
        Vec2::new(self.x.clone() * s.clone(), self.y.clone() * s.clone())
    }

    pub fn to_f64(&self) -> Vec2<f64> {
        Vec2::new(self.x.to_f64(), self.y.to_f64())
    }

    pub fn length_f64(&self) -> f64 {
        let v = self.to_f64();
        v.x.hypot(v.y)
    }

    /// Lexicographic order on (x, y).
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.x
            .cmp_to(&other.x)
            .then_with(|| self.y.cmp_to(&other.y))
    }

    /// Same direction (positive multiples of each other).
    pub fn same_direction(&self, other: &Self) -> bool {
        self.cross(other).is_zero() && self.dot(other).signum() > 0
    }
}

impl PlanarVec {
    /// Both coordinates expressed at a common multiple level.
    pub fn lift(&self, level: u32) -> PlanarVec {
        Vec2::new(self.x.lift(level), self.y.lift(level))
    }

    pub fn level(&self) -> u32 {
        crate::algnum::lcm_levels([self.x.level(), self.y.level()])
    }
}

impl<S: Scalar> Add for Vec2<S> {
    type Output = Vec2<S>;
    fn add(self, o: Vec2<S>) -> Vec2<S> {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl<S: Scalar> Sub for Vec2<S> {
    type Output = Vec2<S>;
    fn sub(self, o: Vec2<S>) -> Vec2<S> {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl<S: Scalar> Add for &Vec2<S> {
    type Output = Vec2<S>;
    fn add(self, o: &Vec2<S>) -> Vec2<S> {
        Vec2::new(self.x.clone() + o.x.clone(), self.y.clone() + o.y.clone())
    }
}

impl<S: Scalar> Sub for &Vec2<S> {
    type Output = Vec2<S>;
    fn sub(self, o: &Vec2<S>) -> Vec2<S> {
        Vec2::new(self.x.clone() - o.x.clone(), self.y.clone() - o.y.clone())
    }
}

impl<S: Scalar> Neg for Vec2<S> {
    type Output = Vec2<S>;
    fn neg(self) -> Vec2<S> {
        Vec2::new(-self.x, -self.y)
    }
}

impl<S: Scalar> Neg for &Vec2<S> {
    type Output = Vec2<S>;
    fn neg(self) -> Vec2<S> {
        Vec2::new(-self.x.clone(), -self.y.clone())
    }
}

/// Half of the plane a direction falls in, relative to a reference direction:
/// 0 for angles in `[0, π)`, 1 for `[π, 2π)`.
fn half<S: Scalar>(v: &Vec2<S>, reference: &Vec2<S>) -> u8 {
    let y = reference.cross(v).signum();
    let x = reference.dot(v).signum();
    if y > 0 || (y == 0 && x > 0) {
        0
    } else {
        1
    }
}

/// Compare the counterclockwise angles of `a` and `b` measured from `reference`,
/// each taken in `[0, 2π)`.
pub fn angle_cmp<S: Scalar>(reference: &Vec2<S>, a: &Vec2<S>, b: &Vec2<S>) -> Ordering {
    let (ha, hb) = (half(a, reference), half(b, reference));
    if ha != hb {
        return ha.cmp(&hb);
    }
    match a.cross(b).signum() {
        1 => Ordering::Less,
        -1 => Ordering::Greater,
        _ => Ordering::Equal,
    }
}
