//! Fixed-point evaluation of `cos(2πk/N)` and `sin(2πk/N)` with a certified
//! absolute error of at most `2^-bits` per entry.
//!
//! Values are big integers `m` standing for `m / 2^bits`. The work is done
//! with 40 guard bits; every series term contributes at most one unit of
//! truncation error at working precision, and the term counts involved are
//! far below `2^30`, so the final right shift leaves a total error under one
//! unit in the last place.

use num_bigint::BigInt;
use num_traits::{One, Zero};

const GUARD: u32 = 40;

#[derive(Debug, Clone)]
pub(crate) struct TrigTable {
    /// `(cos, sin)` of `2πk/N` scaled by `2^bits`.
    pub entries: Vec<(BigInt, BigInt)>,
}

/// `2^w * atan(1/x)` by the alternating Gregory series.
fn atan_inv(x: u64, w: u32) -> BigInt {
    let one = BigInt::one() << w;
    let x2 = BigInt::from(x) * x;
    let mut power = one / x; // 2^w / x^(2k+1)
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        let term = &power / (2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

/// `2^w * π` via Machin's formula.
fn pi_fixed(w: u32) -> BigInt {
    atan_inv(5, w) * 16 - atan_inv(239, w) * 4
}

/// cos and sin of `phi / 2^w` for `0 <= phi/2^w < 1.6`, at working precision `w`.
fn cos_sin_fixed(phi: &BigInt, w: u32) -> (BigInt, BigInt) {
    let one = BigInt::one() << w;
    let phi2 = (phi * phi) >> w;
    let mut cos = BigInt::zero();
    let mut sin = BigInt::zero();
    let mut term_c = one.clone();
    let mut term_s = phi.clone();
    let mut j: u64 = 0;
    while !(term_c.is_zero() && term_s.is_zero()) {
        if j % 2 == 0 {
            cos += &term_c;
            sin += &term_s;
        } else {
            cos -= &term_c;
            sin -= &term_s;
        }
        term_c = ((&term_c * &phi2) >> w) / ((2 * j + 1) * (2 * j + 2));
        term_s = ((&term_s * &phi2) >> w) / ((2 * j + 2) * (2 * j + 3));
        j += 1;
    }
    (cos, sin)
}

fn round_shift(v: BigInt, by: u32) -> BigInt {
    let half = BigInt::one() << (by - 1);
    (v + half) >> by
}

pub(crate) fn trig_table(level: u32, bits: u32) -> TrigTable {
    let w = bits + GUARD;
    let n = level as u64;
    let pi = pi_fixed(w);
    let two_pi = &pi * 2;
    let mut entries = Vec::with_capacity(level as usize);
    for k in 0..n {
        // Reduce to a quarter turn: 2πk/N = q·π/2 + φ with 0 <= φ < π/2.
        let quarter = (4 * k) / n;
        let rem_num = 4 * k - quarter * n; // φ = 2π · rem_num / (4N)
        let phi = (&two_pi * rem_num) / (4 * n);
        let (c, s) = cos_sin_fixed(&phi, w);
        let (c, s) = match quarter {
            0 => (c, s),
            1 => (-s, c),
            2 => (-c, -s),
            _ => (s, -c),
        };
        entries.push((round_shift(c, GUARD), round_shift(s, GUARD)));
    }
    TrigTable { entries }
}
