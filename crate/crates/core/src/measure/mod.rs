//! Moran measures `δ_{ρD_1} * δ_{ρ²D_2} * ...` with consecutive digit sets
//! `D_n = {0, 1, ..., N_n - 1}`.

mod config;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{out_of_range, Error, Result};
use crate::exact::{is_prime, perfect_power_decompose};

pub use config::parse_measure_config;

/// The contraction `ρ = (p/q)^(1/r)` in canonical form, so that `q·x^r - p`
/// is the minimal polynomial of `ρ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContractionRatio {
    p: BigInt,
    q: BigInt,
    r: u32,
}

impl ContractionRatio {
    /// Accepts only canonical triples; see [`canonicalize_ratio`] for the
    /// normalizing constructor.
    pub fn new(p: BigInt, q: BigInt, r: u32) -> Result<Self> {
        check_ratio_bounds(&p, &q, r)?;
        if common_root_exponent(&p, &q)?.gcd(&r) != 1 {
            return Err(Error::InvalidRatio(format!(
                "({p}/{q})^(1/{r}) is not canonical; p/q is a perfect power sharing a factor with r"
            )));
        }
        Ok(Self { p, q, r })
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// `ρ` in double precision, for bounds and display only.
    pub fn to_f64(&self) -> f64 {
        let p = self.p.to_f64().unwrap_or(f64::NAN);
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        (p / q).powf(1.0 / f64::from(self.r))
    }
}

impl fmt::Display for ContractionRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.r == 1 {
            write!(f, "{}/{}", self.p, self.q)
        } else {
            write!(f, "({}/{})^(1/{})", self.p, self.q, self.r)
        }
    }
}

fn check_ratio_bounds(p: &BigInt, q: &BigInt, r: u32) -> Result<()> {
    if *p < BigInt::one() {
        return Err(Error::InvalidRatio(format!("p = {p} must be positive")));
    }
    if p >= q {
        return Err(Error::InvalidRatio(format!(
            "p = {p} must be smaller than q = {q}"
        )));
    }
    if !p.gcd(q).is_one() {
        return Err(Error::InvalidRatio(format!("gcd({p}, {q}) is not 1")));
    }
    if r < 1 {
        return Err(Error::InvalidRatio("r must be at least 1".into()));
    }
    Ok(())
}

/// Largest `m` such that both `p` and `q` are perfect `m`-th powers.
fn common_root_exponent(p: &BigInt, q: &BigInt) -> Result<u32> {
    let (_, eq) = perfect_power_decompose(q)?;
    if p.is_one() {
        return Ok(eq);
    }
    let (_, ep) = perfect_power_decompose(p)?;
    Ok(ep.gcd(&eq))
}

/// Rewrites `(p/q)^(1/r)` with the smallest possible `r`.
///
/// ```
/// use moran::measure::canonicalize_ratio;
/// use num_bigint::BigInt;
///
/// let rho = canonicalize_ratio(BigInt::from(4), BigInt::from(9), 4).unwrap();
/// assert_eq!((rho.p(), rho.q(), rho.r()), (&BigInt::from(2), &BigInt::from(3), 2));
/// ```
pub fn canonicalize_ratio(p: BigInt, q: BigInt, r: u32) -> Result<ContractionRatio> {
    check_ratio_bounds(&p, &q, r)?;
    let (mut p, mut q, mut r) = (p, q, r);
    loop {
        let m = common_root_exponent(&p, &q)?;
        let g = m.gcd(&r);
        if g == 1 {
            return Ok(ContractionRatio { p, q, r });
        }
        p = p.nth_root(g);
        q = q.nth_root(g);
        r /= g;
    }
}

/// Eventually periodic digit cardinalities `n -> N_n`, every entry prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitSequence {
    preperiod: Vec<u64>,
    period: Vec<u64>,
}

impl DigitSequence {
    pub fn new(preperiod: Vec<u64>, period: Vec<u64>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        if let Some(&bad) = preperiod.iter().chain(&period).find(|&&d| !is_prime(d)) {
            return Err(Error::NotPrime(bad));
        }
        Ok(Self { preperiod, period })
    }

    /// `N_n = N` for every level.
    pub fn constant(digit: u64) -> Result<Self> {
        Self::new(Vec::new(), vec![digit])
    }

    pub fn preperiod(&self) -> &[u64] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u64] {
        &self.period
    }

    /// `N_n` for `n >= 1`.
    pub fn digit_at(&self, n: u64) -> Result<u64> {
        if n < 1 {
            return Err(out_of_range("level", "at least 1", n));
        }
        let idx = n - 1;
        let pre = self.preperiod.len() as u64;
        Ok(if idx < pre {
            self.preperiod[idx as usize]
        } else {
            self.period[((idx - pre) % self.period.len() as u64) as usize]
        })
    }

    /// `M = sup N_n`.
    pub fn sup_digit(&self) -> u64 {
        self.preperiod
            .iter()
            .chain(&self.period)
            .copied()
            .max()
            .expect("period is nonempty")
    }

    pub fn is_constant(&self) -> bool {
        let first = self.period[0];
        self.preperiod.iter().chain(&self.period).all(|&d| d == first)
    }

    /// Every digit value that occurs at some level.
    pub fn distinct_digits(&self) -> BTreeSet<u64> {
        self.preperiod.iter().chain(&self.period).copied().collect()
    }

    /// Digits that occur infinitely often.
    pub fn tail_digits(&self) -> BTreeSet<u64> {
        self.period.iter().copied().collect()
    }

    /// Digits that occur at some level `n >= 2`.
    pub fn digits_from_level_two(&self) -> BTreeSet<u64> {
        let skip = usize::from(!self.preperiod.is_empty());
        self.preperiod
            .iter()
            .skip(skip)
            .chain(&self.period)
            .copied()
            .collect()
    }

    /// Number of levels after which the sequence repeats with period `|period|`.
    pub fn preperiod_len(&self) -> u64 {
        self.preperiod.len() as u64
    }
}

impl fmt::Display for DigitSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[u64]| {
            v.iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "preperiod=[{}] period=[{}]",
            list(&self.preperiod),
            list(&self.period)
        )
    }
}

/// A contraction ratio paired with a digit sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MoranMeasure {
    ratio: ContractionRatio,
    digits: DigitSequence,
}

impl MoranMeasure {
    pub fn new(ratio: ContractionRatio, digits: DigitSequence) -> Self {
        Self { ratio, digits }
    }

    /// `ρ = p/q` with constant digit `N`, the common case in tests and docs.
    pub fn rational_constant(p: i64, q: i64, digit: u64) -> Result<Self> {
        Ok(Self::new(
            canonicalize_ratio(BigInt::from(p), BigInt::from(q), 1)?,
            DigitSequence::constant(digit)?,
        ))
    }

    pub fn ratio(&self) -> &ContractionRatio {
        &self.ratio
    }

    pub fn digits(&self) -> &DigitSequence {
        &self.digits
    }

    pub fn digit_at(&self, n: u64) -> Result<u64> {
        self.digits.digit_at(n)
    }

    pub fn sup_digit(&self) -> u64 {
        self.digits.sup_digit()
    }
}

impl fmt::Display for MoranMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rho={} {}", self.ratio, self.digits)
    }
}

impl std::str::FromStr for MoranMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_measure_config(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ratio(p: i64, q: i64, r: u32) -> Result<ContractionRatio> {
        canonicalize_ratio(BigInt::from(p), BigInt::from(q), r)
    }

    fn triple(c: &ContractionRatio) -> (i64, i64, u32) {
        (c.p().to_i64().unwrap(), c.q().to_i64().unwrap(), c.r())
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(triple(&ratio(4, 9, 4).unwrap()), (2, 3, 2));
        assert_eq!(triple(&ratio(1, 2, 1).unwrap()), (1, 2, 1));
        assert_eq!(triple(&ratio(8, 27, 3).unwrap()), (2, 3, 1));
        // 2/3 cubed really is 8/27.
        assert_eq!(BigInt::from(8).nth_root(3), BigInt::from(2));
        assert_eq!(BigInt::from(27).nth_root(3), BigInt::from(3));
        assert_eq!(triple(&ratio(1, 4, 2).unwrap()), (1, 2, 1));
        assert_eq!(triple(&ratio(1, 16, 6).unwrap()), (1, 4, 3));
        assert_eq!(triple(&ratio(4, 9, 3).unwrap()), (4, 9, 3));
    }

    #[test]
    fn ratio_errors() {
        assert!(ratio(3, 3, 1).is_err());
        assert!(ratio(5, 3, 1).is_err());
        assert!(ratio(2, 4, 1).is_err());
        assert!(ratio(0, 4, 1).is_err());
        assert!(ratio(1, 4, 0).is_err());
        assert!(ContractionRatio::new(BigInt::from(4), BigInt::from(9), 4).is_err());
        assert!(ContractionRatio::new(BigInt::from(2), BigInt::from(3), 2).is_ok());
    }

    #[test]
    fn digit_lookup() {
        let seq = DigitSequence::new(vec![3], vec![5, 7]).unwrap();
        assert_eq!(seq.digit_at(1).unwrap(), 3);
        assert_eq!(seq.digit_at(4).unwrap(), 5);
        assert_eq!(seq.digit_at(5).unwrap(), 7);
        assert!(seq.digit_at(0).is_err());
        let constant = DigitSequence::new(vec![], vec![3]).unwrap();
        assert_eq!(constant.digit_at(10).unwrap(), 3);
    }

    #[test]
    fn sup_digits() {
        let sup = |pre: Vec<u64>, per: Vec<u64>| DigitSequence::new(pre, per).unwrap().sup_digit();
        assert_eq!(sup(vec![3], vec![5, 7]), 7);
        assert_eq!(sup(vec![], vec![3]), 3);
        assert_eq!(sup(vec![13], vec![5]), 13);
    }

    #[test]
    fn digit_validation() {
        assert_eq!(DigitSequence::new(vec![], vec![4]), Err(Error::NotPrime(4)));
        assert_eq!(DigitSequence::new(vec![1], vec![3]), Err(Error::NotPrime(1)));
        assert_eq!(DigitSequence::new(vec![3], vec![]), Err(Error::EmptyPeriod));
    }

    #[test]
    fn level_two_digits() {
        let seq = DigitSequence::new(vec![2, 5], vec![3]).unwrap();
        assert_eq!(seq.digits_from_level_two(), BTreeSet::from([3, 5]));
        let seq = DigitSequence::new(vec![], vec![2, 3]).unwrap();
        assert_eq!(seq.digits_from_level_two(), BTreeSet::from([2, 3]));
    }

    fn primes() -> impl Strategy<Value = u64> {
        prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])
    }

    proptest! {
        #[test]
        fn canonicalization_is_idempotent(p in 1i64..200, q in 2i64..400, r in 1u32..13) {
            prop_assume!(p < q && num_integer::gcd(p, q) == 1);
            let c = ratio(p, q, r).unwrap();
            let again = canonicalize_ratio(c.p().clone(), c.q().clone(), c.r()).unwrap();
            prop_assert_eq!(&again, &c);
            prop_assert!(ContractionRatio::new(c.p().clone(), c.q().clone(), c.r()).is_ok());
            // Same real number.
            let lhs = (p as f64 / q as f64).powf(1.0 / r as f64);
            prop_assert!((lhs - c.to_f64()).abs() < 1e-12);
        }

        #[test]
        fn eventually_periodic(
            pre in prop::collection::vec(primes(), 0..4),
            per in prop::collection::vec(primes(), 1..5),
            n in 1u64..200,
        ) {
            let seq = DigitSequence::new(pre.clone(), per.clone()).unwrap();
            if n > pre.len() as u64 {
                prop_assert_eq!(
                    seq.digit_at(n + per.len() as u64).unwrap(),
                    seq.digit_at(n).unwrap()
                );
            }
            let span = (pre.len() + per.len()) as u64;
            let max = (1..=span).map(|k| seq.digit_at(k).unwrap()).max().unwrap();
            prop_assert_eq!(seq.sup_digit(), max);
        }
    }
}
