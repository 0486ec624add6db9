//! Property checkers for two structural facts about the zero set: linear
//! relations among three powers of `ρ` force congruent exponents, and a zero
//! that is a difference of two zeros shares a digit with both.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{out_of_range, Error, Result};
use crate::exact::Rational;
use crate::freq::Frequency;
use crate::measure::MoranMeasure;
use crate::zeros::{enumerate_zeros, zero_witnesses};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CongruenceCheck {
    pub identity_holds: bool,
    pub congruent: bool,
}

fn require_irrational(measure: &MoranMeasure) -> Result<u32> {
    match measure.ratio().r() {
        1 => Err(Error::Hypothesis(
            "exponent congruence needs r > 1".to_string(),
        )),
        r => Ok(r),
    }
}

/// Tests `b1·ρ^k + b2·ρ^j = b3·ρ^u` exactly and whether `k ≡ j ≡ u (mod r)`.
///
/// ```
/// use moran::{MoranMeasure, DigitSequence, measure::canonicalize_ratio, ortho::check_exponent_congruence};
///
/// let m = MoranMeasure::new(
///     canonicalize_ratio(2.into(), 3.into(), 2).unwrap(),
///     DigitSequence::new(vec![], vec![5, 7]).unwrap(),
/// );
/// let c = check_exponent_congruence(&m, [(3, 2), (1, 0), (3, 0)]).unwrap();
/// assert!(c.identity_holds && c.congruent);
/// ```
pub fn check_exponent_congruence(
    measure: &MoranMeasure,
    terms: [(i64, u32); 3],
) -> Result<CongruenceCheck> {
    let r = require_irrational(measure)?;
    if let Some(&(b, _)) = terms.iter().find(|(b, _)| *b == 0) {
        return Err(out_of_range("coefficient", "nonzero", b));
    }
    let ratio = measure.ratio();
    let power = |b: i64, e: u32| {
        Frequency::monomial(ratio, Rational::from_integer(BigInt::from(b)), -i64::from(e))
    };
    let [(b1, k), (b2, j), (b3, u)] = terms;
    let lhs = power(b1, k).add(&power(b2, j))?;
    Ok(CongruenceCheck {
        identity_holds: lhs == power(b3, u),
        congruent: k % r == j % r && j % r == u % r,
    })
}

/// Tally of an exhaustive scan; `violations` lists term triples for which
/// the identity holds with non-congruent exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceScan {
    pub checked: u64,
    pub identities: u64,
    pub violations: Vec<[(i64, u32); 3]>,
}

/// Runs [`check_exponent_congruence`] over all `b_i ∈ [-b_max, b_max] \ {0}`
/// and exponents `0..=e_max`.
///
/// Each `ρ^e` is `c_e·ρ^(e mod r)` with `c_e = (p/q)^(e div r)`; scaling by
/// `q^(e_max div r)` makes every `c_e` an integer, so triples are compared
/// coordinate-wise in machine integers when they fit.
pub fn scan_exponent_congruence(
    measure: &MoranMeasure,
    b_max: i64,
    e_max: u32,
) -> Result<CongruenceScan> {
    let r = require_irrational(measure)?;
    if b_max < 1 {
        return Err(out_of_range("b_max", "at least 1", b_max));
    }
    let ratio = measure.ratio();
    let top = e_max / r;
    let scaled: Vec<BigInt> = (0..=e_max)
        .map(|e| {
            let c = e / r;
            num_traits::pow(ratio.p().clone(), c as usize)
                * num_traits::pow(ratio.q().clone(), (top - c) as usize)
        })
        .collect();
    let bound = BigInt::from(b_max) * 2;
    let small: Option<Vec<i128>> = if scaled.iter().all(|x| BigInt::bits(&(x * &bound)) < 120) {
        scaled.iter().map(|x| x.to_i128()).collect()
    } else {
        None
    };
    let bs: Vec<i64> = (-b_max..=b_max).filter(|&b| b != 0).collect();
    let exps: Vec<(u32, u32, u32)> = (0..=e_max)
        .flat_map(|k| (0..=e_max).flat_map(move |j| (0..=e_max).map(move |u| (k, j, u))))
        .collect();

    let per_triple = |&(k, j, u): &(u32, u32, u32)| -> Result<CongruenceScan> {
        let mut tally = CongruenceScan {
            checked: 0,
            identities: 0,
            violations: Vec::new(),
        };
        let congruent = k % r == j % r && j % r == u % r;
        let (ik, ij, iu) = ((k % r) as usize, (j % r) as usize, (u % r) as usize);
        let mut v = vec![0i128; r as usize];
        for &b1 in &bs {
            for &b2 in &bs {
                for &b3 in &bs {
                    tally.checked += 1;
                    let holds = match &small {
                        Some(x) => {
                            v[ik] = 0;
                            v[ij] = 0;
                            v[iu] = 0;
                            v[ik] += i128::from(b1) * x[k as usize];
                            v[ij] += i128::from(b2) * x[j as usize];
                            v[iu] -= i128::from(b3) * x[u as usize];
                            v[ik] == 0 && v[ij] == 0 && v[iu] == 0
                        }
                        None => {
                            check_exponent_congruence(measure, [(b1, k), (b2, j), (b3, u)])?
                                .identity_holds
                        }
                    };
                    if holds {
                        tally.identities += 1;
                        if !congruent {
                            tally.violations.push([(b1, k), (b2, j), (b3, u)]);
                        }
                    }
                }
            }
        }
        Ok(tally)
    };
    let parts = exps
        .par_iter()
        .map(per_triple)
        .collect::<Result<Vec<_>>>()?;
    let mut total = CongruenceScan {
        checked: 0,
        identities: 0,
        violations: Vec::new(),
    };
    for part in parts {
        total.checked += part.checked;
        total.identities += part.identities;
        total.violations.extend(part.violations);
    }
    Ok(total)
}

/// A pair of zeros whose difference is a zero, yet no single digit value is
/// carried by witnesses of all three.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CardinalityViolation {
    pub first: Frequency,
    pub second: Frequency,
    pub first_digits: BTreeSet<u64>,
    pub second_digits: BTreeSet<u64>,
    pub difference_digits: BTreeSet<u64>,
}

/// Scans ordered pairs from [`enumerate_zeros`]`(n_max, a_max)` and returns
/// every pair violating the shared-digit property.
pub fn check_equal_cardinality_property(
    measure: &MoranMeasure,
    n_max: u64,
    a_max: u64,
) -> Result<Vec<CardinalityViolation>> {
    let zeros: Vec<_> = enumerate_zeros(measure, n_max, a_max)?.into_iter().collect();
    let digits_of = |f: &Frequency| -> Result<BTreeSet<u64>> {
        Ok(zero_witnesses(measure, f)?.into_iter().map(|w| w.digit).collect())
    };
    let own = zeros.par_iter().map(digits_of).collect::<Result<Vec<_>>>()?;
    let found = (0..zeros.len())
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            for j in 0..zeros.len() {
                if i == j {
                    continue;
                }
                let diff = digits_of(&zeros[j].subtract(&zeros[i])?)?;
                if diff.is_empty() {
                    continue;
                }
                let shared = own[i].iter().any(|d| own[j].contains(d) && diff.contains(d));
                if !shared {
                    out.push(CardinalityViolation {
                        first: zeros[i].clone(),
                        second: zeros[j].clone(),
                        first_digits: own[i].clone(),
                        second_digits: own[j].clone(),
                        difference_digits: diff,
                    });
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(found.into_iter().flatten().collect())
}
