//! Certified fixed-point approximations of `cos(2πk/N)`.
//!
//! Every routine carries an explicit error bound in units of the last place,
//! so an interval `value ± error` always contains the true real number.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Extra bits carried through the series evaluations before rounding.
const GUARD_BITS: u32 = 32;

/// `values[k]` approximates `cos(2πk/N) · 2^precision` to within `error` ulps.
#[derive(Debug, Clone)]
pub(crate) struct CosineTable {
    pub precision: u32,
    pub values: Vec<BigInt>,
    pub error: u64,
}

impl CosineTable {
    pub fn new(order: u64, count: usize, precision: u32) -> CosineTable {
        let work = precision + GUARD_BITS;
        let (pi, pi_err) = pi_fixed(work);
        let mut values = Vec::with_capacity(count);
        let mut worst = 0u64;
        for k in 0..count as u64 {
            let (v, e) = cos_two_pi_fraction(k, order, &pi, pi_err, work);
            worst = worst.max(e);
            values.push(v.div_floor(&(BigInt::one() << GUARD_BITS)));
        }
        // Rounding down by GUARD_BITS adds at most one ulp.
        let error = worst.div_ceil(1u64 << GUARD_BITS) + 1;
        CosineTable {
            precision,
            values,
            error,
        }
    }
}

/// `atan(1/x) · 2^q` with its error bound.
fn atan_inverse(x: u64, q: u32) -> (BigInt, u64) {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut term: BigInt = (BigInt::one() << q) / &x;
    let mut sum = term.clone();
    let mut err = 1u64;
    let mut n = 0u64;
    loop {
        // Each computed term is within 2 ulps of the true term.
        term /= &x2;
        n += 1;
        if term.is_zero() {
            break;
        }
        let t = &term / BigInt::from(2 * n + 1);
        if n % 2 == 1 {
            sum -= t;
        } else {
            sum += t;
        }
        err += 2;
    }
    // Alternating tail bounded by the first omitted term.
    (sum, err + 2)
}

/// `π · 2^q` via Machin's formula.
fn pi_fixed(q: u32) -> (BigInt, u64) {
    let (a5, e5) = atan_inverse(5, q);
    let (a239, e239) = atan_inverse(239, q);
    (a5 * 16 - a239 * 4, 16 * e5 + 4 * e239)
}

/// `cos(2πk/N) · 2^q`, reducing the angle into `[0, π/2]` first.
fn cos_two_pi_fraction(k: u64, order: u64, pi: &BigInt, pi_err: u64, q: u32) -> (BigInt, u64) {
    let r = k % order;
    let (mut a, mut b) = (r, order);
    if 2 * a > b {
        a = b - a;
    }
    let mut negate = false;
    if 4 * a > b {
        negate = true;
        // cos(2π t) = -cos(2π (1/2 - t))
        let (na, nb) = (b - 2 * a, 2 * b);
        a = na;
        b = nb;
    }
    let x = (pi * BigInt::from(2 * a)) / BigInt::from(b);
    let x_err = pi_err + 1;
    let (c, e) = cos_fixed(&x, x_err, q);
    (if negate { -c } else { c }, e)
}

/// Taylor series for `cos(x)` with `0 <= x <= π/2`, all quantities scaled
/// by `2^q`.
fn cos_fixed(x: &BigInt, x_err: u64, q: u32) -> (BigInt, u64) {
    let scale = BigInt::one() << q;
    let x2 = (x * x) >> q;
    let x2_err = 4 * x_err + 2;
    let mut term = scale.clone();
    let mut term_err = 0u64;
    let mut sum = scale;
    let mut err = 0u64;
    let mut n = 1u64;
    loop {
        let k = (2 * n - 1) * (2 * n);
        term = (&term * &x2) / (BigInt::from(k) << q);
        term_err = (2 * x2_err + 3 * term_err).div_ceil(k) + 1;
        if term.is_zero() {
            err += 2 * term_err + 1;
            break;
        }
        if n % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        err += term_err;
        n += 1;
    }
    debug_assert!(!sum.is_negative() || sum.abs() <= BigInt::from(err));
    (sum, err)
}
