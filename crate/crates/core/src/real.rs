//! Fixed-point reals with an explicit error radius, and the
//! arbitrary-precision result type returned by [`Frequency::to_real`].
//!
//! [`Frequency::to_real`]: crate::freq::Frequency::to_real

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::Rational;

/// `mant · 2^-frac_bits`, off from the true value by at most
/// `err · 2^-frac_bits`.
#[derive(Debug, Clone)]
pub(crate) struct Fixed {
    pub mant: BigInt,
    pub err: BigInt,
    pub frac_bits: u64,
}

impl Fixed {
    pub fn zero(frac_bits: u64) -> Self {
        Self {
            mant: BigInt::zero(),
            err: BigInt::zero(),
            frac_bits,
        }
    }

    /// `floor(x · 2^F)`; exact when `x` is dyadic enough.
    pub fn from_rational(x: &Rational, frac_bits: u64) -> Self {
        let scaled = x.numer() << frac_bits;
        let (mant, rem) = scaled.div_mod_floor(x.denom());
        Self {
            mant,
            err: if rem.is_zero() { BigInt::zero() } else { BigInt::one() },
            frac_bits,
        }
    }

    /// `(num/den)^(1/root)` for positive `num`, `den`.
    ///
    /// With `x = floor(num·2^(F·root)/den)` and `y = floor(x^(1/root))` the true
    /// scaled value `t` satisfies `x <= t^root < x + 1`, and
    /// `(x+1)^(1/root) - x^(1/root) <= 1`, so `0 <= t - y < 2`.
    pub fn root_of_ratio(num: &BigInt, den: &BigInt, root: u32, frac_bits: u64) -> Self {
        debug_assert!(num.is_positive() && den.is_positive() && root >= 1);
        let x = (num << (frac_bits * u64::from(root))) / den;
        let mant = x.nth_root(root);
        Self {
            mant,
            err: BigInt::from(2),
            frac_bits,
        }
    }

    /// Multiplies by an exact rational: `floor(a·mant/b)` with radius
    /// `ceil(|a|·err/b) + 1`.
    pub fn scale(&self, x: &Rational) -> Self {
        let mant = (x.numer() * &self.mant).div_floor(x.denom());
        let err = (x.numer().abs() * &self.err).div_ceil(x.denom()) + 1;
        Self {
            mant,
            err,
            frac_bits: self.frac_bits,
        }
    }

    pub fn add(&self, other: &Fixed) -> Self {
        debug_assert_eq!(self.frac_bits, other.frac_bits);
        Self {
            mant: &self.mant + &other.mant,
            err: &self.err + &other.err,
            frac_bits: self.frac_bits,
        }
    }

    /// Error radius as an `f64` upper bound.
    pub fn err_f64(&self) -> f64 {
        scaled_to_f64(&self.err, -(self.frac_bits as i64)) * (1.0 + 1e-15)
    }
}

/// `n · 2^exp` in double precision, without overflowing intermediate steps.
pub(crate) fn scaled_to_f64(n: &BigInt, exp: i64) -> f64 {
    if n.is_zero() {
        return 0.0;
    }
    let bits = n.bits() as i64;
    let shift = (bits - 64).max(0);
    let top = (n.abs() >> shift as u64).to_u64().expect("at most 64 bits") as f64;
    let sign = if n.sign() == Sign::Minus { -1.0 } else { 1.0 };
    sign * pow2(top, shift + exp)
}

fn pow2(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

/// A real number `mantissa · 2^exponent` whose relative distance from the
/// value it approximates is at most `2^(4 - precision_bits)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxReal {
    mantissa: BigInt,
    exponent: i64,
    precision_bits: u32,
}

impl ApproxReal {
    pub(crate) fn new(mantissa: BigInt, exponent: i64, precision_bits: u32) -> Self {
        Self {
            mantissa,
            exponent,
            precision_bits,
        }
    }

    pub fn zero(precision_bits: u32) -> Self {
        Self::new(BigInt::zero(), 0, precision_bits)
    }

    /// An `f64` is an exact dyadic rational; no error is introduced.
    pub fn from_f64(x: f64) -> Option<Self> {
        let r = Rational::from_float(x)?;
        // Denominator is a power of two for any finite double.
        let exp = -(r.denom().bits() as i64 - 1);
        Some(Self::new(r.numer().clone(), exp, 53))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn relative_error_bound(&self) -> f64 {
        2f64.powi(4 - self.precision_bits as i32)
    }

    /// The stored dyadic value, exactly.
    pub fn to_rational(&self) -> Rational {
        if self.exponent >= 0 {
            Rational::from_integer(&self.mantissa << self.exponent as u64)
        } else {
            Rational::new(
                self.mantissa.clone(),
                BigInt::one() << self.exponent.unsigned_abs(),
            )
        }
    }

    pub fn to_f64(&self) -> f64 {
        scaled_to_f64(&self.mantissa, self.exponent)
    }

    /// Decimal expansion truncated to `digits` places after the point.
    pub fn to_decimal(&self, digits: usize) -> String {
        let value = self.to_rational();
        let scaled = (value.numer().abs() * num_traits::pow(BigInt::from(10), digits))
            / value.denom();
        let mut s = scaled.to_string();
        if s.len() <= digits {
            s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
        }
        let (int, frac) = s.split_at(s.len() - digits);
        let sign = if value.is_negative() { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }
}

impl fmt::Display for ApproxReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // log10(2) ≈ 0.30103
        let digits = (f64::from(self.precision_bits) * 0.30103) as usize;
        f.write_str(&self.to_decimal(digits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn root_brackets_true_value() {
        // sqrt(3/2) at 100 bits: y <= t < y + 2, checked by squaring integers.
        let f = Fixed::root_of_ratio(&big(3), &big(2), 2, 100);
        let target = big(3) << 200u32; // t^2 · 2 = 3 · 2^200
        let lo = &f.mant * &f.mant * 2;
        let hi = (&f.mant + 2) * (&f.mant + 2) * 2;
        assert!(lo <= target && target < hi);
    }

    #[test]
    fn scaling_keeps_radius_honest() {
        let third = Rational::new(big(1), big(3));
        let f = Fixed::from_rational(&third, 60);
        let g = f.scale(&Rational::from_integer(big(3)));
        // 3 · floor(2^60/3) = 2^60 - 1, radius 3·1 + 1.
        assert_eq!(g.mant, (big(1) << 60u32) - 1);
        assert_eq!(g.err, big(4));
    }

    #[test]
    fn f64_round_trip() {
        for x in [0.0, 1.5, -2.75, 1e-300, 6.02e23, f64::MIN_POSITIVE] {
            let a = ApproxReal::from_f64(x).unwrap();
            assert_eq!(a.to_f64(), x);
            assert_eq!(a.to_rational(), Rational::from_float(x).unwrap());
        }
        assert!(ApproxReal::from_f64(f64::NAN).is_none());
    }

    #[test]
    fn decimal_rendering() {
        let a = ApproxReal::new(big(-5), -2, 64);
        assert_eq!(a.to_decimal(3), "-1.250");
        assert_eq!(ApproxReal::new(big(1), -4, 64).to_decimal(2), "0.06");
    }
}
