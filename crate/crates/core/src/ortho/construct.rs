//! Explicit extremal families.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::OrthogonalFamily;
use crate::error::{out_of_range, Error, Result};
use crate::exact::{lcm, multiplicative_order};
use crate::freq::Frequency;
use crate::measure::MoranMeasure;

fn shares_factor(a: &BigInt, digit: u64) -> bool {
    !a.gcd(&BigInt::from(digit)).is_one()
}

/// `{0} ∪ {j·ρ^-t/M : 1 <= j < M}` where `t` is the first level carrying
/// the largest digit `M`. Requires every digit coprime to both `p` and `q`.
///
/// ```
/// use moran::{MoranMeasure, ortho::construct_lambda0};
///
/// let m = MoranMeasure::rational_constant(1, 2, 3).unwrap();
/// let fam = construct_lambda0(&m).unwrap();
/// assert_eq!(fam.to_string(), "{0, 2/3, 4/3}");
/// ```
pub fn construct_lambda0(measure: &MoranMeasure) -> Result<OrthogonalFamily> {
    let ratio = measure.ratio();
    for d in measure.digits().distinct_digits() {
        if shares_factor(ratio.p(), d) || shares_factor(ratio.q(), d) {
            return Err(Error::Hypothesis(format!(
                "digit {d} must be coprime to p = {} and q = {}",
                ratio.p(),
                ratio.q()
            )));
        }
    }
    let top = measure.sup_digit();
    let digits = measure.digits();
    let last = digits.preperiod_len() + digits.period().len() as u64;
    let t = (1..=last)
        .find(|&n| digits.digit_at(n) == Ok(top))
        .expect("the largest digit occurs within one period");
    let mut members = vec![Frequency::zero(ratio)];
    for j in 1..top {
        members.push(Frequency::from_zero_form(measure, t, &BigInt::from(j))?);
    }
    OrthogonalFamily::try_new(measure, members)
}

/// How the exponent step `s` of [`construct_lambda_star_with`] is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StarOrder {
    /// Constant digit sequences only; `s` is the order of `q` modulo the digit.
    #[default]
    Constant,
    /// Any digit sequence; `s` is the lcm of the orders of `q` modulo every
    /// digit, and each member uses the digit at its own level. The result is
    /// still verified, so a failure surfaces as [`Error::ConstructionFailed`].
    Lcm,
}

/// [`construct_lambda_star_with`] in [`StarOrder::Constant`] mode.
pub fn construct_lambda_star(
    measure: &MoranMeasure,
    alpha: u64,
    branch: u32,
) -> Result<OrthogonalFamily> {
    construct_lambda_star_with(measure, alpha, branch, StarOrder::Constant)
}

/// The `α` frequencies `λ_n = q^((α+n)s)/N · ρ^-(n·s·r + i)`, `1 <= n <= α`,
/// on branch `i`. Requires every digit to divide `p` and be coprime to `q`.
///
/// ```
/// use moran::{MoranMeasure, ortho::construct_lambda_star};
///
/// let m = MoranMeasure::rational_constant(5, 7, 5).unwrap();
/// assert_eq!(construct_lambda_star(&m, 10, 1).unwrap().len(), 10);
/// ```
pub fn construct_lambda_star_with(
    measure: &MoranMeasure,
    alpha: u64,
    branch: u32,
    order: StarOrder,
) -> Result<OrthogonalFamily> {
    let ratio = measure.ratio();
    let r = ratio.r();
    if alpha < 1 {
        return Err(out_of_range("alpha", "at least 1", alpha));
    }
    if !(1..=r).contains(&branch) {
        return Err(out_of_range("branch", "in 1..=r", branch));
    }
    let digits = measure.digits().distinct_digits();
    for &d in &digits {
        if shares_factor(ratio.q(), d) || !shares_factor(ratio.p(), d) {
            return Err(Error::Hypothesis(format!(
                "digit {d} must divide p = {} and be coprime to q = {}",
                ratio.p(),
                ratio.q()
            )));
        }
    }
    let s = match order {
        StarOrder::Constant => {
            if !measure.digits().is_constant() {
                return Err(Error::NonConstantDigits);
            }
            multiplicative_order(ratio.q(), measure.sup_digit())?
        }
        StarOrder::Lcm => digits
            .iter()
            .map(|&d| multiplicative_order(ratio.q(), d))
            .try_fold(1, |acc, s| s.map(|s| lcm(acc, s)))?,
    };
    let stride = s
        .checked_mul(u64::from(r))
        .ok_or_else(|| out_of_range("order times r", "below 2^64", s))?;
    let mut members = Vec::new();
    for n in 1..=alpha {
        let level = n
            .checked_mul(stride)
            .and_then(|l| l.checked_add(u64::from(branch)))
            .ok_or_else(|| out_of_range("level", "below 2^64", n))?;
        let power = usize::try_from((alpha + n) * s)
            .map_err(|_| out_of_range("exponent", "addressable", (alpha + n) * s))?;
        let a = num_traits::pow(ratio.q().clone(), power);
        members.push(Frequency::from_zero_form(measure, level, &a)?);
    }
    OrthogonalFamily::try_new(measure, members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;
    use crate::measure::{canonicalize_ratio, DigitSequence};
    use crate::ortho::is_bizero_family;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn sqrt23() -> MoranMeasure {
        MoranMeasure::new(
            canonicalize_ratio(big(2), big(3), 2).unwrap(),
            DigitSequence::new(vec![], vec![5, 7]).unwrap(),
        )
    }

    #[test]
    fn lambda0_cantor() {
        let m = MoranMeasure::rational_constant(1, 2, 3).unwrap();
        let fam = construct_lambda0(&m).unwrap();
        let expected: Vec<_> = ["0", "2/3", "4/3"]
            .iter()
            .map(|s| Frequency::parse(&m, s).unwrap())
            .collect();
        assert!(fam.iter().eq(expected.iter()));
    }

    #[test]
    fn lambda0_irrational() {
        let m = sqrt23();
        let fam = construct_lambda0(&m).unwrap();
        assert_eq!(fam.len(), 7);
        // t = 2, ρ^-2 = 3/2, so members are 3j/14.
        for j in 1..7 {
            let f = Frequency::rational(m.ratio(), Rational::new(big(3 * j), big(14)));
            assert!(fam.contains(&f), "missing 3·{j}/14");
        }
    }

    #[test]
    fn lambda0_hypothesis_gate() {
        let m = MoranMeasure::rational_constant(5, 7, 5).unwrap();
        assert!(matches!(construct_lambda0(&m), Err(Error::Hypothesis(_))));
        let m = MoranMeasure::rational_constant(1, 3, 3).unwrap();
        assert!(matches!(construct_lambda0(&m), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn lambda_star_values() {
        let m = MoranMeasure::rational_constant(5, 7, 5).unwrap();
        let fam = construct_lambda_star(&m, 2, 1).unwrap();
        // s = ord_5(7) = 4; λ_n = 7^(4(2+n))/5 · (7/5)^(4n+1).
        let lambda = |n: u32| {
            Rational::new(num_traits::pow(big(7), (4 * (2 + n)) as usize), big(5))
                * Rational::new(
                    num_traits::pow(big(7), (4 * n + 1) as usize),
                    num_traits::pow(big(5), (4 * n + 1) as usize),
                )
        };
        let expected: Vec<_> = [1, 2]
            .iter()
            .map(|&n| Frequency::rational(m.ratio(), lambda(n)))
            .collect();
        assert!(fam.iter().eq(expected.iter()));
    }

    #[test]
    fn lambda_star_exceeds_sup_digit() {
        let m = MoranMeasure::rational_constant(5, 7, 5).unwrap();
        assert_eq!(construct_lambda_star(&m, 1, 1).unwrap().len(), 1);
        for alpha in 2..=10 {
            let fam = construct_lambda_star(&m, alpha, 1).unwrap();
            assert_eq!(fam.len() as u64, alpha);
            let members: Vec<_> = fam.iter().cloned().collect();
            assert!(is_bizero_family(&m, &members).unwrap().is_orthogonal());
        }
    }

    #[test]
    fn lambda_star_on_every_branch() {
        // ρ = (5/7)^(1/2), N ≡ 5.
        let m = MoranMeasure::new(
            canonicalize_ratio(big(5), big(7), 2).unwrap(),
            DigitSequence::constant(5).unwrap(),
        );
        for branch in 1..=2 {
            let fam = construct_lambda_star(&m, 6, branch).unwrap();
            assert_eq!(fam.len(), 6);
            for f in fam.iter() {
                assert_eq!(f.support(), vec![branch as usize % 2]);
            }
        }
        assert!(construct_lambda_star(&m, 3, 0).is_err());
        assert!(construct_lambda_star(&m, 3, 3).is_err());
        assert!(construct_lambda_star(&m, 0, 1).is_err());
    }

    #[test]
    fn lambda_star_gates() {
        let m = MoranMeasure::rational_constant(1, 2, 3).unwrap();
        assert!(matches!(construct_lambda_star(&m, 2, 1), Err(Error::Hypothesis(_))));
        // p = 15 carries both 3 and 5.
        let mixed = MoranMeasure::new(
            canonicalize_ratio(big(15), big(16), 1).unwrap(),
            DigitSequence::new(vec![], vec![3, 5]).unwrap(),
        );
        assert_eq!(construct_lambda_star(&mixed, 2, 1), Err(Error::NonConstantDigits));
        let fam = construct_lambda_star_with(&mixed, 4, 1, StarOrder::Lcm).unwrap();
        assert_eq!(fam.len(), 4);
    }
}
