//! Integer arithmetic of the multiplicative structure: `n = α·l^k`
//! decompositions, the classes `Λ_i = {i·l^k} ∩ N`, `ξ`, the sets `A_q`
//! and the offset bounds for products of non-multiples of `l`.

use serde::{Deserialize, Serialize};

use crate::error::ArithError;

/// `n = alpha · base^k` with `base ∤ alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Decomposition {
    pub alpha: u64,
    pub k: u64,
    pub base: u64,
}

fn check_base(l: u64) -> Result<(), ArithError> {
    if l < 2 {
        Err(ArithError::BaseTooSmall(l))
    } else {
        Ok(())
    }
}

pub fn decompose(n: u64, l: u64) -> Result<Decomposition, ArithError> {
    check_base(l)?;
    if n == 0 {
        return Err(ArithError::Zero);
    }
    let (alpha, k) = strip(n, l);
    Ok(Decomposition { alpha, k, base: l })
}

/// Removes every factor `l` from `n`; `n >= 1`, `l >= 2`.
pub(crate) fn strip(mut n: u64, l: u64) -> (u64, u64) {
    let mut k = 0;
    while n % l == 0 {
        n /= l;
        k += 1;
    }
    (n, k)
}

pub(crate) fn strip_u128(mut n: u128, l: u64) -> (u128, u64) {
    let l = l as u128;
    let mut k = 0;
    while n % l == 0 {
        n /= l;
        k += 1;
    }
    (n, k)
}

/// The class `Λ_[i]`, stored by its least element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LambdaClass {
    representative: u64,
    base: u64,
}

impl LambdaClass {
    pub fn representative(&self) -> u64 {
        self.representative
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    /// Number of chain elements `rep·l^j` that are `<= n`.
    pub fn chain_len(&self, n: u64) -> u64 {
        chain_len(self.representative, self.base, n)
    }
}

pub fn class_of(n: u64, l: u64) -> Result<LambdaClass, ArithError> {
    let d = decompose(n, l)?;
    Ok(LambdaClass {
        representative: d.alpha,
        base: l,
    })
}

/// The class containing `α·Λ_i`. Requires `l ∤ α` and `i` a representative.
pub fn class_image(alpha: u64, i: u64, l: u64) -> Result<LambdaClass, ArithError> {
    check_base(l)?;
    if alpha == 0 || i == 0 {
        return Err(ArithError::Zero);
    }
    if alpha % l == 0 {
        return Err(ArithError::DivisibleByBase { value: alpha, base: l });
    }
    if i % l == 0 {
        return Err(ArithError::DivisibleByBase { value: i, base: l });
    }
    let prod = alpha.checked_mul(i).ok_or(ArithError::Overflow)?;
    class_of(prod, l)
}

/// `ξ = max{n <= length : l ∤ n}`.
pub fn xi(length: u64, l: u64) -> u64 {
    if length % l == 0 {
        length - 1
    } else {
        length
    }
}

/// `A_{q,N} = [1, N] \ qN`, ascending.
pub fn a_set(q: u64, n: u64) -> Vec<u64> {
    (1..=n).filter(|x| x % q != 0).collect()
}

/// Number of `j >= 0` with `i·l^j <= n`.
pub fn chain_len(i: u64, l: u64, n: u64) -> u64 {
    let mut count = 0;
    let mut x = i as u128;
    while x <= n as u128 {
        count += 1;
        x *= l as u128;
    }
    count
}

/// Prime factorization by trial division, ascending primes.
pub fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == [(n, 1)]
}

/// Exponent of the prime `p` in `n`.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// `M` with `A_l · A_{l,N} ⊆ ⋃_{i<=M} l^i A_l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OffsetBound {
    pub m: u64,
    pub base: u64,
    pub range: u64,
}

/// `M = max{⌊v_p(k)/e_p⌋ : p^e_p || l, k ∈ A_{l,N}} + 1`.
pub fn offset_bound(l: u64, n: u64) -> Result<OffsetBound, ArithError> {
    check_base(l)?;
    let factors = prime_factors(l);
    let worst = a_set(l, n)
        .into_iter()
        .flat_map(|k| factors.iter().map(move |&(p, e)| (valuation(k, p) / e) as u64))
        .max()
        .unwrap_or(0);
    Ok(OffsetBound {
        m: worst + 1,
        base: l,
        range: n,
    })
}

/// Offset bound for the product `i·|u|·α·l^k` with `i ∈ A_{l,|v|}` and
/// `α ∈ A_l`: `M1 + M2`, where `M1` bounds the `l`-exponent of
/// `α1·A_{l,|v|}` (`|u| = α1·l^k1`) and `M2 = offset_bound(l, α1·|v|)`.
pub fn pair_offset_bound(u_len: u64, v_len: u64, l: u64) -> Result<u64, ArithError> {
    let d = decompose(u_len, l)?;
    let m1 = a_set(l, v_len)
        .into_iter()
        .map(|b| d.alpha.checked_mul(b).map(|x| strip(x, l).1))
        .try_fold(0, |acc, x| x.map(|x| acc.max(x)))
        .ok_or(ArithError::Overflow)?;
    let range = d.alpha.checked_mul(v_len).ok_or(ArithError::Overflow)?;
    let m2 = offset_bound(l, range)?.m;
    Ok(m1 + m2)
}

/// `i·|u|·α·l^k = j·l^exponent` with `exponent = k1 + k + c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Offset {
    pub j: u64,
    pub exponent: u64,
    pub c: u64,
}

pub fn offset_of(i: u64, u_len: u64, alpha: u64, k: u64, l: u64) -> Result<Offset, ArithError> {
    check_base(l)?;
    if alpha % l == 0 {
        return Err(ArithError::DivisibleByBase { value: alpha, base: l });
    }
    if i % l == 0 {
        return Err(ArithError::DivisibleByBase { value: i, base: l });
    }
    let k1 = decompose(u_len, l)?.k;
    let prod = (i as u128)
        .checked_mul(u_len as u128)
        .and_then(|x| x.checked_mul(alpha as u128))
        .ok_or(ArithError::Overflow)?;
    let (j, e) = strip_u128(prod, l);
    let j = u64::try_from(j).map_err(|_| ArithError::Overflow)?;
    let exponent = e + k;
    Ok(Offset {
        j,
        exponent,
        c: exponent - k1 - k,
    })
}
