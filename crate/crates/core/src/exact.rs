//! Integer and rational number theory primitives.
//!
//! All integers are arbitrary precision. Rationals are
//! [`num_rational::BigRational`], which normalizes on construction: the
//! denominator is positive and coprime to the numerator, and zero is `0/1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{out_of_range, Error, Result};

pub type Rational = num_rational::BigRational;

/// Writes `n = base^exponent` with the exponent as large as possible.
///
/// ```
/// use moran::exact::perfect_power_decompose;
/// use num_bigint::BigInt;
///
/// assert_eq!(perfect_power_decompose(&BigInt::from(64)).unwrap(), (BigInt::from(2), 6));
/// assert_eq!(perfect_power_decompose(&BigInt::from(12)).unwrap(), (BigInt::from(12), 1));
/// ```
pub fn perfect_power_decompose(n: &BigInt) -> Result<(BigInt, u32)> {
    if *n < BigInt::from(2) {
        return Err(out_of_range("n", "at least 2", n));
    }
    // n = b^e with b >= 2 forces e <= log2(n) < bits(n).
    let max_exp = u32::try_from(n.bits()).unwrap_or(u32::MAX);
    for e in (2..=max_exp).rev() {
        let b = n.nth_root(e);
        if b > BigInt::one() && num_traits::pow(b.clone(), e as usize) == *n {
            return Ok((b, e));
        }
    }
    Ok((n.clone(), 1))
}

/// Smallest `s >= 1` with `a^s = 1 (mod m)`.
pub fn multiplicative_order(a: &BigInt, m: u64) -> Result<u64> {
    if m < 2 {
        return Err(out_of_range("modulus", "at least 2", m));
    }
    let residue = a
        .mod_floor(&BigInt::from(m))
        .to_u64()
        .expect("residue below a u64 modulus");
    if residue.gcd(&m) != 1 {
        return Err(Error::NotAUnit {
            a: a.to_string(),
            m,
        });
    }
    let (residue, modulus) = (u128::from(residue), u128::from(m));
    let mut power = residue;
    let mut s = 1;
    while power != 1 {
        power = power * residue % modulus;
        s += 1;
    }
    Ok(s)
}

/// Largest `v` with `d^v | n`.
pub fn padic_valuation(n: &BigInt, d: &BigInt) -> Result<u64> {
    if n.is_zero() {
        return Err(out_of_range("n", "nonzero", n));
    }
    if *d < BigInt::from(2) {
        return Err(out_of_range("d", "at least 2", d));
    }
    let mut rest = n.abs();
    let mut v = 0;
    loop {
        let (quot, rem) = rest.div_rem(d);
        if !rem.is_zero() {
            return Ok(v);
        }
        rest = quot;
        v += 1;
    }
}

/// Trial division; digit cardinalities are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// `(num/den)^exp` for any integer exponent. `num` and `den` must be nonzero
/// when `exp` is negative.
pub fn rational_pow(num: &BigInt, den: &BigInt, exp: i64) -> Rational {
    let e = exp.unsigned_abs() as usize;
    let (top, bottom) = (num_traits::pow(num.clone(), e), num_traits::pow(den.clone(), e));
    if exp >= 0 {
        Rational::new(top, bottom)
    } else {
        Rational::new(bottom, top)
    }
}

/// Euler's totient by trial factorization.
pub fn totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            while n % d == 0 {
                n /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}
