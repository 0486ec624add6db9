//! Regime classification from the arithmetic of `p`, `q` and the digits.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::measure::MoranMeasure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `r = 1` and `q/(N·p)` is a positive integer for every digit at levels `n >= 2`.
    Spectral,
    /// Every tail digit is coprime to `p` and `q`; at most `M` mutually
    /// orthogonal exponentials exist, and `M` is attained.
    AtMostM(u64),
    /// Every tail digit divides `p` and is coprime to `q`; orthogonal
    /// families exist of every finite size, none infinite.
    UnboundedFinite,
    /// Every tail digit is coprime to `q`; no infinite orthogonal family.
    NoInfiniteOrthogonal,
    /// Some tail digit divides `q`; nothing is ruled out.
    PossiblyInfinite,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::Spectral => f.write_str("Spectral"),
            Regime::AtMostM(m) => write!(f, "AtMostM({m})"),
            Regime::UnboundedFinite => f.write_str("UnboundedFinite"),
            Regime::NoInfiniteOrthogonal => f.write_str("NoInfiniteOrthogonal"),
            Regime::PossiblyInfinite => f.write_str("PossiblyInfinite"),
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "Spectral" => Regime::Spectral,
            "UnboundedFinite" => Regime::UnboundedFinite,
            "NoInfiniteOrthogonal" => Regime::NoInfiniteOrthogonal,
            "PossiblyInfinite" => Regime::PossiblyInfinite,
            _ => {
                let m = s
                    .strip_prefix("AtMostM(")
                    .and_then(|t| t.strip_suffix(')'))
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| format!("unknown regime {s:?}"))?;
                Regime::AtMostM(m)
            }
        })
    }
}

/// Arithmetic facts about one distinct digit value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitReport {
    pub digit: u64,
    pub gcd_p: BigInt,
    pub gcd_q: BigInt,
    pub in_preperiod: bool,
    /// Occurs infinitely often.
    pub in_tail: bool,
    /// Occurs at some level `n >= 2`.
    pub from_level_two: bool,
    /// `r = 1` and `q/(digit·p)` is an integer.
    pub spectral_integer: bool,
}

impl DigitReport {
    fn coprime_to_both(&self) -> bool {
        self.gcd_p.is_one() && self.gcd_q.is_one()
    }

    fn divides_p_only(&self) -> bool {
        !self.gcd_p.is_one() && self.gcd_q.is_one()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegimeClassification {
    pub regime: Regime,
    pub r: u32,
    /// One row per distinct digit, ascending.
    pub digits: Vec<DigitReport>,
    /// Preperiod-only digits that break the hypothesis the tail satisfies.
    pub preperiod_exceptions: Vec<u64>,
    pub justification: Vec<String>,
}

impl RegimeClassification {
    /// Re-derives the regime from the carried report alone.
    pub fn recompute(&self) -> Regime {
        decide(self.r, &self.digits)
    }
}

fn decide(r: u32, rows: &[DigitReport]) -> Regime {
    if r == 1 && rows.iter().filter(|d| d.from_level_two).all(|d| d.spectral_integer) {
        return Regime::Spectral;
    }
    let tail: Vec<_> = rows.iter().filter(|d| d.in_tail).collect();
    let sup = rows.iter().map(|d| d.digit).max().unwrap_or(0);
    if tail.iter().all(|d| d.coprime_to_both()) {
        Regime::AtMostM(sup)
    } else if tail.iter().all(|d| d.divides_p_only()) {
        Regime::UnboundedFinite
    } else if tail.iter().all(|d| d.gcd_q.is_one()) {
        Regime::NoInfiniteOrthogonal
    } else {
        Regime::PossiblyInfinite
    }
}

/// Classifies a measure. Only the eventually periodic tail decides the
/// non-spectral regimes; preperiod digits that break the tail's hypothesis
/// are reported as exceptions.
///
/// ```
/// use moran::{MoranMeasure, ortho::{classify, Regime}};
///
/// let m = MoranMeasure::rational_constant(5, 7, 5).unwrap();
/// assert_eq!(classify(&m).regime, Regime::UnboundedFinite);
/// ```
pub fn classify(measure: &MoranMeasure) -> RegimeClassification {
    let ratio = measure.ratio();
    let (p, q, r) = (ratio.p(), ratio.q(), ratio.r());
    let seq = measure.digits();
    let tail = seq.tail_digits();
    let later = seq.digits_from_level_two();
    let rows: Vec<_> = seq
        .distinct_digits()
        .into_iter()
        .map(|digit| {
            let big = BigInt::from(digit);
            DigitReport {
                digit,
                gcd_p: p.gcd(&big),
                gcd_q: q.gcd(&big),
                in_preperiod: seq.preperiod().contains(&digit),
                in_tail: tail.contains(&digit),
                from_level_two: later.contains(&digit),
                spectral_integer: r == 1 && (q % (&big * p)).is_zero(),
            }
        })
        .collect();
    let regime = decide(r, &rows);

    let fits = |d: &DigitReport| match regime {
        Regime::AtMostM(_) => d.coprime_to_both(),
        Regime::UnboundedFinite => d.divides_p_only(),
        Regime::NoInfiniteOrthogonal => d.gcd_q.is_one(),
        Regime::Spectral | Regime::PossiblyInfinite => true,
    };
    let preperiod_exceptions: Vec<_> = rows
        .iter()
        .filter(|d| !d.in_tail && !fits(d))
        .map(|d| d.digit)
        .collect();

    let mut justification = Vec::new();
    match regime {
        Regime::Spectral => justification.push(format!(
            "r = 1 and q/(N·p) is a positive integer for every digit N at levels n >= 2"
        )),
        Regime::AtMostM(m) => justification.push(format!(
            "every tail digit is coprime to p = {p} and q = {q}; sup digit M = {m}"
        )),
        Regime::UnboundedFinite => {
            justification.push(format!(
                "every tail digit divides p = {p} and is coprime to q = {q}"
            ));
            justification.push(
                "finiteness: gcd(q, N_n) > 1 holds for no tail level, so no infinite family exists"
                    .to_string(),
            );
        }
        Regime::NoInfiniteOrthogonal => justification.push(format!(
            "gcd(q, N_n) > 1 holds at finitely many levels only (q = {q}), so no infinite family exists"
        )),
        Regime::PossiblyInfinite => justification.push(format!(
            "some tail digit shares a factor with q = {q}"
        )),
    }
    for d in &preperiod_exceptions {
        justification.push(format!(
            "preperiod digit {d} does not satisfy the tail hypothesis; finitely many levels do not affect the regime"
        ));
    }

    RegimeClassification {
        regime,
        r,
        digits: rows,
        preperiod_exceptions,
        justification,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{canonicalize_ratio, DigitSequence};
    use proptest::prelude::*;

    fn measure(p: i64, q: i64, r: u32, pre: Vec<u64>, period: Vec<u64>) -> MoranMeasure {
        MoranMeasure::new(
            canonicalize_ratio(p.into(), q.into(), r).unwrap(),
            DigitSequence::new(pre, period).unwrap(),
        )
    }

    #[test]
    fn trichotomy() {
        assert_eq!(classify(&measure(1, 4, 1, vec![], vec![2])).regime, Regime::Spectral);
        assert_eq!(classify(&measure(1, 2, 1, vec![], vec![3])).regime, Regime::AtMostM(3));
        assert_eq!(classify(&measure(5, 7, 1, vec![], vec![5])).regime, Regime::UnboundedFinite);
    }

    #[test]
    fn preperiod_exception_is_reported() {
        let c = classify(&measure(1, 2, 1, vec![2], vec![3]));
        assert_eq!(c.regime, Regime::AtMostM(3));
        assert_eq!(c.preperiod_exceptions, vec![2]);
        let row = c.digits.iter().find(|d| d.digit == 2).unwrap();
        assert_eq!(row.gcd_q, BigInt::from(2));
        assert!(row.in_preperiod && !row.in_tail);
    }

    #[test]
    fn remaining_regimes() {
        // 3 | q in the tail.
        assert_eq!(classify(&measure(1, 3, 1, vec![], vec![2, 3])).regime, Regime::PossiblyInfinite);
        // tail mixes a coprime digit with one dividing p.
        assert_eq!(
            classify(&measure(5, 7, 1, vec![], vec![3, 5])).regime,
            Regime::NoInfiniteOrthogonal
        );
        // r > 1 is never spectral.
        assert_eq!(classify(&measure(1, 4, 3, vec![], vec![2])).regime, Regime::PossiblyInfinite);
    }

    #[test]
    fn level_one_digit_does_not_block_spectrality() {
        // q/(N·p) = 6/(5·1) fails only at level 1.
        assert_eq!(classify(&measure(1, 6, 1, vec![5], vec![2, 3])).regime, Regime::Spectral);
    }

    #[test]
    fn display_round_trip() {
        for r in [
            Regime::Spectral,
            Regime::AtMostM(7),
            Regime::UnboundedFinite,
            Regime::NoInfiniteOrthogonal,
            Regime::PossiblyInfinite,
        ] {
            assert_eq!(r.to_string().parse::<Regime>().unwrap(), r);
        }
        assert!("AtMostM(x)".parse::<Regime>().is_err());
    }

    const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

    proptest! {
        #[test]
        fn recomputable_and_rotation_invariant(
            p in 1i64..40, q in 2i64..40, r in 1u32..3,
            pre in prop::collection::vec(0usize..6, 0..3),
            period in prop::collection::vec(0usize..6, 1..4),
            shift in 0usize..4,
        ) {
            prop_assume!(p < q && num_integer::gcd(p, q) == 1);
            let pre: Vec<u64> = pre.into_iter().map(|i| PRIMES[i]).collect();
            let period: Vec<u64> = period.into_iter().map(|i| PRIMES[i]).collect();
            let mut rotated = period.clone();
            rotated.rotate_left(shift % period.len());
            let a = classify(&measure(p, q, r, pre.clone(), period));
            let b = classify(&measure(p, q, r, pre, rotated));
            prop_assert_eq!(a.recompute(), a.regime);
            prop_assert_eq!(a.regime, b.regime);
        }
    }
}
