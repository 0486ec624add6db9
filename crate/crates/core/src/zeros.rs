//! Exact membership in the zero set
//! `Z(μ̂) = ∪_n ρ^-n · (ℤ \ N_nℤ) / N_n`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{out_of_range, Error, Result};
use crate::freq::{Frequency, ZeroWitness};
use crate::measure::MoranMeasure;

/// Every `(n, a)` with `ρ^-n·a/N_n = f`, ordered by level.
///
/// A frequency with two or more nonzero coefficients is never a zero: the
/// powers `ρ^0, ..., ρ^-(r-1)` are linearly independent, and each zero is a
/// single monomial.
///
/// For a single term `c·ρ^-i` with `c = u/v` in lowest terms the candidate
/// levels are `n = i + j·r` (with `j >= 1` when `i = 0`, since `n >= 1`),
/// and the numerator would be `a = N_n·u·p^j / (v·q^j)`. For `a` to be an
/// integer `q^j` must divide `N_n·u·p^j`; since `gcd(p, q) = 1` this means
/// `q^j | N_n·u`, so `q^j <= M·|u|`. With `q >= 2` that caps `j` at
/// `floor(log_q(M·|u|))` and the scan is finite.
pub fn zero_witnesses(measure: &MoranMeasure, f: &Frequency) -> Result<Vec<ZeroWitness>> {
    scan(measure, f, false)
}

/// The witness with the smallest level, if `f` is a zero.
///
/// ```
/// use moran::{freq::Frequency, measure::MoranMeasure, zeros::zero_membership};
///
/// let cantor = MoranMeasure::rational_constant(1, 2, 3).unwrap();
/// let f = Frequency::parse(&cantor, "2/3").unwrap();
/// let w = zero_membership(&cantor, &f).unwrap().unwrap();
/// assert_eq!((w.level, w.digit), (1, 3));
/// assert!(zero_membership(&cantor, &Frequency::parse(&cantor, "1/3").unwrap()).unwrap().is_none());
/// ```
pub fn zero_membership(measure: &MoranMeasure, f: &Frequency) -> Result<Option<ZeroWitness>> {
    Ok(scan(measure, f, true)?.into_iter().next())
}

pub fn is_zero_of(measure: &MoranMeasure, f: &Frequency) -> Result<bool> {
    Ok(!scan(measure, f, true)?.is_empty())
}

fn scan(measure: &MoranMeasure, f: &Frequency, first_only: bool) -> Result<Vec<ZeroWitness>> {
    let ratio = measure.ratio();
    if f.ratio() != ratio {
        return Err(Error::RatioMismatch);
    }
    let Some((index, coeff)) = f.single_term() else {
        return Ok(Vec::new());
    };
    let (p, q, r) = (ratio.p(), ratio.q(), u64::from(ratio.r()));
    assert!(*q >= BigInt::from(2), "p < q forces q >= 2");

    let (u, v) = (coeff.numer(), coeff.denom());
    let cap = BigInt::from(measure.sup_digit()) * u.abs();
    let mut j_max = 0u64;
    let mut q_pow = q.clone();
    while q_pow <= cap {
        j_max += 1;
        q_pow *= q;
    }

    let index = index as u64;
    let j_min = u64::from(index == 0);
    let mut p_pow = num_traits::pow(p.clone(), j_min as usize);
    let mut q_pow = num_traits::pow(q.clone(), j_min as usize);
    let mut found = Vec::new();
    for j in j_min..=j_max {
        let level = index + j * r;
        let digit = measure.digit_at(level)?;
        let big_digit = BigInt::from(digit);
        let (a, rem) = (&big_digit * u * &p_pow).div_rem(&(v * &q_pow));
        if rem.is_zero() && !(&a % &big_digit).is_zero() {
            found.push(ZeroWitness {
                level,
                numerator: a,
                digit,
            });
            if first_only {
                break;
            }
        }
        p_pow *= p;
        q_pow *= q;
    }
    Ok(found)
}

/// `{ρ^-n·a/N_n : 1 <= n <= n_max, 0 < |a| <= a_max, N_n ∤ a}`, deduplicated
/// and in canonical order.
pub fn enumerate_zeros(measure: &MoranMeasure, n_max: u64, a_max: u64) -> Result<BTreeSet<Frequency>> {
    if n_max < 1 {
        return Err(out_of_range("n_max", "at least 1", n_max));
    }
    if a_max < 1 {
        return Err(out_of_range("a_max", "at least 1", a_max));
    }
    let per_level = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let digit = measure.digit_at(n)?;
            let a_max = i64::try_from(a_max).map_err(|_| out_of_range("a_max", "below 2^63", a_max))?;
            (-a_max..=a_max)
                .filter(|&a| a != 0 && a % digit as i64 != 0)
                .map(|a| Frequency::from_zero_form(measure, n, &BigInt::from(a)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_level.into_iter().flatten().collect())
}
