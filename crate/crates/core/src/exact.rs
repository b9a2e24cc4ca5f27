//! Exact helpers: fraction comparison and lossless float decoding.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One};

/// Compares `a/b` with `c/d` (positive denominators) exactly.
pub(crate) fn cmp_frac(a: u64, b: u64, c: u64, d: u64) -> Ordering {
    (a as u128 * d as u128).cmp(&(c as u128 * b as u128))
}

/// Compares `e1/sqrt(s1 t1)` with `e2/sqrt(s2 t2)` exactly by squaring.
pub(crate) fn cmp_directed(e1: u64, s1: u64, t1: u64, e2: u64, s2: u64, t2: u64) -> Ordering {
    let lhs = (e1 as u128 * e1 as u128) * (s2 as u128 * t2 as u128);
    let rhs = (e2 as u128 * e2 as u128) * (s1 as u128 * t1 as u128);
    lhs.cmp(&rhs)
}

/// Writes a finite non-negative float as `num / 2^shift` with no rounding.
pub(crate) fn dyadic(x: f64) -> (i128, u32) {
    assert!(
        x.is_finite() && x >= 0.0,
        "dyadic expects a finite non-negative value, got {x}"
    );
    if x == 0.0 {
        return (0, 0);
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (mut mant, mut e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    while mant & 1 == 0 && e < 0 {
        mant >>= 1;
        e += 1;
    }
    if e >= 0 {
        ((mant as i128) << e, 0)
    } else {
        (mant as i128, (-e) as u32)
    }
}

pub(crate) fn big(x: f64) -> BigRational {
    BigRational::from_f64(x).expect("finite float")
}

/// `hi - lo < 1 / (k (k - 1))`, evaluated exactly. For `k < 2` the
/// threshold is treated as infinite.
pub(crate) fn gap_below(lo: f64, hi: f64, k: u64) -> bool {
    if k < 2 {
        return true;
    }
    let thr = BigRational::new(BigInt::one(), BigInt::from(k) * BigInt::from(k - 1));
    big(hi) - big(lo) < thr
}

/// Like [`gap_below`], but the threshold is shrunk by a relative `2^-32`
/// so that float bounds sitting on the threshold up to rounding do not stop.
pub(crate) fn gap_clearly_below(lo: f64, hi: f64, k: u64) -> bool {
    if k < 2 {
        return true;
    }
    let scale = BigInt::one() << 32u32;
    let thr = BigRational::new(&scale - BigInt::one(), scale * BigInt::from(k) * BigInt::from(k - 1));
    big(hi) - big(lo) < thr
}
