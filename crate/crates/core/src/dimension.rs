//! Box dimension of the multiplicative golden mean shift with `l = 2`:
//! `(1/(2 ln 2)) Σ_{n>=1} ln F_n / 2^n`, where `F_n` counts golden mean words
//! of length `n`.
//!
//! Terms are evaluated in binary fixed point with [`FRACTION_BITS`] bits, so
//! summation is exact and the only error is one rounding per logarithm.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

pub const FRACTION_BITS: u32 = 256;

/// Nonnegative fixed-point number `raw / 2^FRACTION_BITS`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fixed(BigUint);

impl Fixed {
    pub fn from_raw(raw: BigUint) -> Self {
        Fixed(raw)
    }

    pub fn raw(&self) -> &BigUint {
        &self.0
    }

    pub fn from_integer(n: u64) -> Self {
        Fixed(BigUint::from(n) << FRACTION_BITS)
    }

    /// `num / 2^shift`, exact whenever `shift <= FRACTION_BITS`.
    pub fn dyadic(num: u64, shift: u32) -> Self {
        Fixed((BigUint::from(num) << FRACTION_BITS) >> shift)
    }

    pub fn add(&self, other: &Fixed) -> Fixed {
        Fixed(&self.0 + &other.0)
    }

    pub fn abs_diff(&self, other: &Fixed) -> Fixed {
        if self.0 >= other.0 {
            Fixed(&self.0 - &other.0)
        } else {
            Fixed(&other.0 - &self.0)
        }
    }

    pub fn shr(&self, bits: u32) -> Fixed {
        Fixed(&self.0 >> bits)
    }

    pub fn mul(&self, other: &Fixed) -> Fixed {
        Fixed((&self.0 * &other.0) >> FRACTION_BITS)
    }

    /// Truncated quotient; `other` must be nonzero.
    pub fn div(&self, other: &Fixed) -> Fixed {
        Fixed((&self.0 << FRACTION_BITS) / &other.0)
    }

    pub fn to_f64(&self) -> f64 {
        let shift = self.0.bits().saturating_sub(60);
        let top = (&self.0 >> shift).to_u64().expect("at most 60 bits") as f64;
        top * 2f64.powi(shift as i32 - FRACTION_BITS as i32)
    }

    /// Decimal expansion truncated to `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let int = &self.0 >> FRACTION_BITS;
        let frac = &self.0 - (&int << FRACTION_BITS);
        let scaled = (frac * BigUint::from(10u8).pow(digits as u32)) >> FRACTION_BITS;
        format!("{int}.{scaled:0>digits$}")
    }
}

impl fmt::Display for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(f.precision().unwrap_or(30)))
    }
}

impl Serialize for Fixed {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_decimal(30))
    }
}

/// `atanh(z)` for `0 <= z <= 1/3`.
fn atanh(z: &Fixed) -> Fixed {
    let z2 = z.mul(z);
    let mut power = z.clone();
    let mut sum = Fixed::default();
    let mut k = 1u64;
    while !power.0.is_zero() {
        sum = sum.add(&Fixed(&power.0 / k));
        power = power.mul(&z2);
        k += 2;
    }
    sum
}

pub fn ln2() -> Fixed {
    let third = Fixed::from_integer(1).div(&Fixed::from_integer(3));
    let a = atanh(&third);
    a.add(&a)
}

/// Natural logarithm of a positive integer, split as `m ln 2 + ln(n / 2^m)`
/// with `n / 2^m ∈ [1, 2)`.
pub fn ln(n: &BigUint) -> Fixed {
    assert!(!n.is_zero(), "logarithm of zero");
    let m = n.bits() - 1;
    let y = Fixed((n << FRACTION_BITS) >> m);
    let one = Fixed::from_integer(1);
    let z = Fixed(&y.0 - &one.0).div(&y.add(&one));
    let t = atanh(&z);
    let mut out = t.add(&t);
    let l2 = ln2();
    out = out.add(&Fixed(&l2.0 * m));
    out
}

/// `F_0 = 1, F_1 = 2, F_{n+2} = F_{n+1} + F_n`: the number of golden mean
/// words of length `n`.
pub fn fib(n: u64) -> BigUint {
    let (mut a, mut b) = (BigUint::one(), BigUint::from(2u8));
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

/// `ln F_n / 2^(n+1) / ln 2`, the `n`-th term including the prefactor.
pub fn series_term(n: u64) -> Fixed {
    let l2 = ln2();
    ln(&fib(n)).shr(n as u32 + 1).div(&l2)
}

/// Bound on `Σ_{n>terms}` of the series: `ln F_n <= n ln 2` gives
/// `(1/2) Σ_{n>T} n/2^n = (T+2)/2^(T+1)`.
pub fn tail_bound(terms: u64) -> Fixed {
    Fixed::dyadic(terms + 2, terms as u32 + 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesResult {
    pub partial_sum: Fixed,
    pub terms_used: u64,
    pub tail_bound: Fixed,
}

impl SeriesResult {
    pub fn value(&self) -> f64 {
        self.partial_sum.to_f64()
    }
}

/// Partial sum over `n = 1..=terms`; `terms` is capped by the fixed-point
/// resolution so that the tail bound stays exact.
pub fn dim_b_golden_mean(terms: u64) -> SeriesResult {
    assert!(
        (1..FRACTION_BITS as u64 - 1).contains(&terms),
        "terms must lie in [1, {}]",
        FRACTION_BITS - 2
    );
    let l2 = ln2();
    let mut raw = BigUint::zero();
    for n in 1..=terms {
        raw += ln(&fib(n)).shr(n as u32 + 1).0;
    }
    SeriesResult {
        partial_sum: Fixed(raw).div(&l2),
        terms_used: terms,
        tail_bound: tail_bound(terms),
    }
}
