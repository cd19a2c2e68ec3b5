//! Small integer and floating-point helpers shared across modules.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

/// Length of the standard binary representation of `n` (0 for `n = 0`).
pub fn binary_length(n: u64) -> u32 {
    64 - n.leading_zeros()
}

/// `log2` of a big count; `-inf` for zero.
pub fn log2_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().unwrap() as f64).log2();
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    (top.to_u64().unwrap() as f64).log2() + shift as f64
}

/// Floor of the integer square root of a 128-bit value.
pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x.checked_mul(x).is_none_or(|v| v > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|v| v <= n) {
        x += 1;
    }
    x
}

/// `base^exp`, or `None` on overflow.
pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

/// Largest `r` with `r^m <= n`.
pub fn integer_root(n: u64, m: u32) -> u64 {
    assert!(m >= 1);
    if m == 1 || n < 2 {
        return n;
    }
    let mut r = (n as f64).powf(1.0 / m as f64).round() as u64;
    while r > 0 && checked_pow(r, m).is_none_or(|v| v > n) {
        r -= 1;
    }
    while checked_pow(r + 1, m).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}

/// Largest `e` with `b^e <= n`, for `n >= 1`, `b >= 2`.
pub fn integer_log(n: u64, b: u64) -> u32 {
    debug_assert!(n >= 1 && b >= 2);
    let mut e = 0;
    let mut p: u64 = 1;
    while let Some(next) = p.checked_mul(b) {
        if next > n {
            break;
        }
        p = next;
        e += 1;
    }
    e
}

/// `ceil(2^x)` for `x >= 0`. Integer exponents are exact; otherwise the value is
/// exact whenever `2^x < 2^53` and carries 53 significant bits beyond that.
pub fn ceil_pow2(x: f64) -> BigUint {
    pow2_rounded(x, true)
}

/// `floor(2^x)` for `x >= 0`, with the same precision contract as [`ceil_pow2`].
pub fn floor_pow2(x: f64) -> BigUint {
    pow2_rounded(x, false)
}

fn pow2_rounded(x: f64, ceil: bool) -> BigUint {
    assert!(x >= 0.0 && x.is_finite(), "exponent must be finite and nonnegative");
    if x.fract() == 0.0 {
        return BigUint::from(1u8) << (x as u64);
    }
    if x < 53.0 {
        let v = x.exp2();
        let r = if ceil { v.ceil() } else { v.floor() };
        return BigUint::from(r as u64);
    }
    let whole = x.floor();
    let mantissa = (x - whole).exp2() * (52f64).exp2();
    let m = if ceil { mantissa.ceil() } else { mantissa.floor() } as u64;
    BigUint::from(m) << (whole as u64 - 52)
}

/// `ceil(2^x)` as `u64`, for `x < 63`.
pub fn ceil_pow2_u64(x: f64) -> u64 {
    assert!(x < 63.0);
    ceil_pow2(x).to_u64().unwrap()
}

/// `floor(2^x)` as `u64`, for `x < 63`.
pub fn floor_pow2_u64(x: f64) -> u64 {
    assert!(x < 63.0);
    floor_pow2(x).to_u64().unwrap()
}

/// `log2(2^a + 2^b)` without overflow; `-inf` acts as the additive identity.
pub fn log2_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp2().ln_1p() / std::f64::consts::LN_2
}
