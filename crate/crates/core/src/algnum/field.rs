//! Cyclotomic field tables: the N-th cyclotomic polynomial and the reduction
//! of powers of the generator modulo it.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;

use super::fixed::{self, TrigTable};

/// Precision (bits) of the trig table attached to every field.
pub(crate) const BASE_PRECISION: u32 = 128;

/// Data shared by all elements of `Q(ζ_N)`.
#[derive(Debug)]
pub(crate) struct Field {
    pub level: u32,
    pub degree: usize,
    /// `x^k mod Φ_N` for `0 <= k < rows.len()`, as integer coefficient vectors of length `degree`.
    rows: Vec<Vec<i64>>,
    /// Fixed-point cos/sin of `2πk/N` at 60 bits, used by the fast sign path.
    pub trig60: Vec<(i64, i64)>,
    trig_base: OnceLock<TrigTable>,
}

impl Field {
    fn new(level: u32) -> Field {
        assert!(level >= 1, "cyclotomic level must be positive");
        let phi = cyclotomic_poly(level as u64);
        let degree = phi.len() - 1;
        let n_rows = (2 * degree).max(level as usize + 1);
        let mut rows = Vec::with_capacity(n_rows);
        // x^k mod Φ for k < degree is the unit vector; then shift-and-reduce.
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        for _ in 0..n_rows {
            rows.push(cur.clone());
            // multiply by x
            let top = cur[degree - 1];
            for i in (1..degree).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                // x^degree = -(phi[0] + phi[1] x + ... + phi[degree-1] x^{degree-1})
                for i in 0..degree {
                    cur[i] = cur[i]
                        .checked_sub(top.checked_mul(phi[i]).expect("cyclotomic table overflow"))
                        .expect("cyclotomic table overflow");
                }
            }
        }
        let trig60 = fixed::trig_table(level, 60)
            .entries
            .iter()
            .map(|(c, s)| {
                (
                    i64::try_from(c).expect("60-bit trig value"),
                    i64::try_from(s).expect("60-bit trig value"),
                )
            })
            .collect();
        Field {
            level,
            degree,
            rows,
            trig60,
            trig_base: OnceLock::new(),
        }
    }

    /// Reduction of `x^k` for `k < 2*degree` or `k <= level`.
    pub fn row(&self, k: usize) -> &[i64] {
        &self.rows[k]
    }

    pub fn trig(&self, bits: u32) -> std::borrow::Cow<'_, TrigTable> {
        if bits == BASE_PRECISION {
            std::borrow::Cow::Borrowed(
                self.trig_base
                    .get_or_init(|| fixed::trig_table(self.level, BASE_PRECISION)),
            )
        } else {
            std::borrow::Cow::Owned(fixed::trig_table(self.level, bits))
        }
    }

    /// Reduce a polynomial of degree `< rows.len()` modulo `Φ_N`.
    pub fn reduce(&self, coeffs: &[BigInt]) -> Vec<BigInt> {
        let d = self.degree;
        let mut out: Vec<BigInt> = coeffs.iter().take(d).cloned().collect();
        out.resize(d, BigInt::from(0));
        for (k, c) in coeffs.iter().enumerate().skip(d) {
            if c.bits() == 0 {
                continue;
            }
            for (o, r) in out.iter_mut().zip(&self.rows[k]) {
                if *r != 0 {
                    *o += c * *r;
                }
            }
        }
        out
    }
}

/// Shared, immutable field data for level `n`. Fields are memoised because
/// building the reduction and trig tables dominates small-element arithmetic.
pub(crate) fn field(level: u32) -> Arc<Field> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Field>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().expect("field cache poisoned").get(&level) {
        return f.clone();
    }
    let f = Arc::new(Field::new(level));
    cache
        .lock()
        .expect("field cache poisoned")
        .entry(level)
        .or_insert(f)
        .clone()
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

pub fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

/// Coefficients (constant term first) of the n-th cyclotomic polynomial.
pub fn cyclotomic_poly(n: u64) -> Vec<i64> {
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = exact_div(&num, &cyclotomic_poly(d));
        }
    }
    num
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    // den is monic
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = num.len() - 1 - dd;
    let mut q = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        q[i] = c;
        if c != 0 {
            for (j, dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn degree_is_totient() {
        for n in 1..40u64 {
            assert_eq!(cyclotomic_poly(n).len() as u64 - 1, totient(n), "n = {n}");
        }
    }

    #[test]
    fn power_rows_cycle_with_period_n() {
        for n in [3u32, 5, 8, 12, 16] {
            let f = field(n);
            assert_eq!(f.row(n as usize)[0], 1);
            assert!(f.row(n as usize)[1..].iter().all(|&c| c == 0));
        }
    }
}
