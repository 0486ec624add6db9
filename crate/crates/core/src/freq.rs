//! Exact frequencies in the rational span of `{1, ρ^-1, ..., ρ^-(r-1)}`.
//!
//! Because `q·x^r - p` is the minimal polynomial of `ρ`, those `r` powers are
//! linearly independent over the rationals and every frequency has exactly
//! one coefficient vector. Higher powers fold through `ρ^-r = q/p`.
//!
//! Index `i` of the coefficient vector is the branch of the convolution
//! factorization whose levels are `n ≡ i (mod r)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{out_of_range, Error, Result};
use crate::exact::{rational_pow, Rational};
use crate::measure::{ContractionRatio, MoranMeasure};
use crate::real::{ApproxReal, Fixed};

/// `Σ_i coefficients[i] · ρ^-i`, tagged with the ratio it is expressed against.
///
/// Equality, hashing and ordering are structural. The order compares
/// coefficient vectors lexicographically, which is numeric order when `r = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Frequency {
    ratio: ContractionRatio,
    coeffs: Vec<Rational>,
}

impl Frequency {
    pub fn zero(ratio: &ContractionRatio) -> Self {
        Self {
            ratio: ratio.clone(),
            coeffs: vec![Rational::zero(); ratio.r() as usize],
        }
    }

    pub fn from_coefficients(ratio: &ContractionRatio, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != ratio.r() as usize {
            return Err(out_of_range(
                "coefficient count",
                "equal to r",
                coeffs.len(),
            ));
        }
        Ok(Self {
            ratio: ratio.clone(),
            coeffs,
        })
    }

    /// A rational frequency, placed in coefficient 0.
    pub fn rational(ratio: &ContractionRatio, value: Rational) -> Self {
        Self::monomial(ratio, value, 0)
    }

    /// `coeff · ρ^-exponent` for any integer exponent.
    pub fn monomial(ratio: &ContractionRatio, coeff: Rational, exponent: i64) -> Self {
        let r = i64::from(ratio.r());
        let (folds, index) = exponent.div_mod_floor(&r);
        let mut f = Self::zero(ratio);
        f.coeffs[index as usize] = coeff * rational_pow(ratio.q(), ratio.p(), folds);
        f
    }

    /// `ρ^-n · a / N_n`, an element of the zero set.
    ///
    /// ```
    /// use moran::{freq::Frequency, measure::MoranMeasure};
    /// use num_bigint::BigInt;
    ///
    /// let cantor = MoranMeasure::rational_constant(1, 2, 3).unwrap();
    /// let f = Frequency::from_zero_form(&cantor, 2, &BigInt::from(1)).unwrap();
    /// assert_eq!(f.to_string(), "4/3");
    /// assert!(Frequency::from_zero_form(&cantor, 2, &BigInt::from(6)).is_err());
    /// ```
    pub fn from_zero_form(measure: &MoranMeasure, n: u64, a: &BigInt) -> Result<Self> {
        let digit = measure.digit_at(n)?;
        if a.is_zero() {
            return Err(out_of_range("numerator", "nonzero", a));
        }
        if (a % BigInt::from(digit)).is_zero() {
            return Err(Error::DivisibleNumerator {
                a: a.to_string(),
                digit,
                level: n,
            });
        }
        let exponent = i64::try_from(n).map_err(|_| out_of_range("level", "below 2^63", n))?;
        Ok(Self::monomial(
            measure.ratio(),
            Rational::new(a.clone(), BigInt::from(digit)),
            exponent,
        ))
    }

    pub fn ratio(&self) -> &ContractionRatio {
        &self.ratio
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Indices of the nonzero coefficients.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len())
            .filter(|&i| !self.coeffs[i].is_zero())
            .collect()
    }

    /// The branch index and coefficient, when exactly one is nonzero.
    pub fn single_term(&self) -> Option<(usize, &Rational)> {
        let mut nonzero = self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero());
        let first = nonzero.next()?;
        nonzero.next().is_none().then_some(first)
    }

    fn same_ratio(&self, other: &Frequency) -> Result<()> {
        if self.ratio == other.ratio {
            Ok(())
        } else {
            Err(Error::RatioMismatch)
        }
    }

    pub fn subtract(&self, other: &Frequency) -> Result<Frequency> {
        self.same_ratio(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn add(&self, other: &Frequency) -> Result<Frequency> {
        self.same_ratio(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn neg(&self) -> Frequency {
        Self {
            ratio: self.ratio.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, factor: &Rational) -> Frequency {
        Self {
            ratio: self.ratio.clone(),
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    fn zip_with(&self, other: &Frequency, op: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        Self {
            ratio: self.ratio.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| op(a, b))
                .collect(),
        }
    }

    /// The real value, to a relative accuracy of `2^(4 - precision_bits)`.
    ///
    /// Precision is raised internally until the bound is certified; the loop
    /// ends because a nonzero frequency has a nonzero value.
    pub fn to_real(&self, precision_bits: u32) -> Result<ApproxReal> {
        if precision_bits < 53 {
            return Err(out_of_range("precision_bits", "at least 53", precision_bits));
        }
        if self.is_zero() {
            return Ok(ApproxReal::zero(precision_bits));
        }
        let (p, q, r) = (self.ratio.p(), self.ratio.q(), self.ratio.r());
        let mut guard = 16u64;
        loop {
            let frac_bits = u64::from(precision_bits) + guard;
            let mut sum = Fixed::zero(frac_bits);
            for (i, c) in self.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let term = if i == 0 {
                    Fixed::from_rational(c, frac_bits)
                } else {
                    let e = i as usize;
                    Fixed::root_of_ratio(
                        &num_traits::pow(q.clone(), e),
                        &num_traits::pow(p.clone(), e),
                        r,
                        frac_bits,
                    )
                    .scale(c)
                };
                sum = sum.add(&term);
            }
            let lower = sum.mant.abs() - &sum.err;
            // err <= 2^(4 - prec) · lower certifies the relative bound.
            if lower.is_positive() && (&sum.err << (precision_bits - 4)) <= lower {
                return Ok(ApproxReal::new(sum.mant, -(frac_bits as i64), precision_bits));
            }
            guard *= 2;
        }
    }

    /// Parses a literal: the vector form `c0:c1:...:c(r-1)` or the zero form
    /// `a/N@n` (meaning `ρ^-n · a/N`, with `N` checked against the digit at
    /// level `n`).
    pub fn parse(measure: &MoranMeasure, literal: &str) -> Result<Frequency> {
        let text = literal.trim();
        let bad = |reason: &str| Error::Literal {
            literal: literal.to_string(),
            reason: reason.to_string(),
        };
        if let Some((frac, level)) = text.split_once('@') {
            let (a, digit) = frac
                .split_once('/')
                .ok_or_else(|| bad("zero form must look like a/N@n"))?;
            let a: BigInt = parse_integer(a).ok_or_else(|| bad("numerator is not an integer"))?;
            let digit: u64 = parse_unsigned(digit).ok_or_else(|| bad("digit is not a positive integer"))?;
            let level: u64 = parse_unsigned(level).ok_or_else(|| bad("level is not a positive integer"))?;
            if level < 1 {
                return Err(bad("level must be at least 1"));
            }
            let actual = measure.digit_at(level)?;
            if actual != digit {
                return Err(Error::DigitMismatch {
                    level,
                    claimed: digit,
                    actual,
                });
            }
            return Frequency::from_zero_form(measure, level, &a);
        }
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != measure.ratio().r() as usize {
            return Err(bad(&format!(
                "expected {} colon-separated coefficients",
                measure.ratio().r()
            )));
        }
        let coeffs = parts
            .iter()
            .map(|s| parse_rational(s).ok_or_else(|| bad(&format!("`{s}` is not a rational"))))
            .collect::<Result<Vec<_>>>()?;
        Frequency::from_coefficients(measure.ratio(), coeffs)
    }
}

/// Vector form, which [`Frequency::parse`] reads back unchanged.
impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(":")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

fn parse_unsigned(s: &str) -> Option<u64> {
    let s = s.trim();
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let s = s.trim();
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// `-3/5`, `2`, `0`; denominators must be positive.
pub fn parse_rational(s: &str) -> Option<Rational> {
    match s.trim().split_once('/') {
        Some((num, den)) => {
            let num = parse_integer(num)?;
            let den = den.trim();
            if den.starts_with('-') {
                return None;
            }
            let den = parse_integer(den).filter(Signed::is_positive)?;
            Some(Rational::new(num, den))
        }
        None => parse_integer(s).map(Rational::from_integer),
    }
}

/// Certificate that `ρ^-level · numerator / digit` is a zero of the Fourier
/// transform: `digit = N_level` and `digit ∤ numerator`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZeroWitness {
    pub level: u64,
    pub numerator: BigInt,
    pub digit: u64,
}

impl ZeroWitness {
    pub fn frequency(&self, measure: &MoranMeasure) -> Result<Frequency> {
        let actual = measure.digit_at(self.level)?;
        if actual != self.digit {
            return Err(Error::DigitMismatch {
                level: self.level,
                claimed: self.digit,
                actual,
            });
        }
        Frequency::from_zero_form(measure, self.level, &self.numerator)
    }
}

/// Zero-form literal `a/N@n`.
impl fmt::Display for ZeroWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}@{}", self.numerator, self.digit, self.level)
    }
}
