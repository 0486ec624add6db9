//! Certified numeric evaluation of `μ̂(ξ) = ∏_{n>=1} M_{N_n}(ρⁿξ)`, where
//! `M_N(η) = (1/N)·Σ_{j<N} e^{-2πijη}` is the mask of `{0, ..., N-1}`.
//!
//! Phases `ρⁿξ mod 1` are computed from the exact frequency in fixed point
//! with as many fractional bits as `|ξ|` and the tolerance demand, so large
//! frequencies keep their meaning; only the final trigonometry and products
//! run in `f64`. Every returned value carries an absolute error bound that
//! covers phase rounding, floating-point rounding and truncation of the
//! product.

use std::f64::consts::{LN_2, PI};
use std::io;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{out_of_range, Error, Result};
use crate::exact::{rational_pow, Rational};
use crate::freq::Frequency;
use crate::measure::MoranMeasure;
use crate::real::{scaled_to_f64, ApproxReal, Fixed};

const EPS: f64 = f64::EPSILON / 2.0;

/// Precision policy for phase reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FtOptions {
    /// Lower bound on fractional bits used for phases.
    pub precision_bits: u64,
    /// Evaluation fails with [`Error::PrecisionExceeded`] beyond this.
    pub max_precision_bits: u64,
}

impl FtOptions {
    pub const DEFAULT_PRECISION_BITS: u64 = 128;
    pub const DEFAULT_MAX_PRECISION_BITS: u64 = 4096;
}

impl Default for FtOptions {
    fn default() -> Self {
        Self {
            precision_bits: Self::DEFAULT_PRECISION_BITS,
            max_precision_bits: Self::DEFAULT_MAX_PRECISION_BITS,
        }
    }
}

/// `value` is within `error_bound` of `μ̂(ξ)` in absolute complex distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifiedComplex {
    pub value: Complex64,
    pub error_bound: f64,
    /// Number of product factors evaluated.
    pub terms: u64,
    /// Fractional bits used for phases.
    pub precision_bits: u64,
}

impl CertifiedComplex {
    pub fn re(&self) -> f64 {
        self.value.re
    }

    pub fn im(&self) -> f64 {
        self.value.im
    }

    pub fn abs(&self) -> f64 {
        self.value.norm()
    }
}

/// `M_N(ξ)` in double precision.
///
/// ```
/// use moran::fourier::mask_value;
///
/// assert!((mask_value(4, 0.0).unwrap().re - 1.0).abs() < 1e-15);
/// assert!(mask_value(2, 0.5).unwrap().norm() < 1e-15);
/// ```
pub fn mask_value(n: u64, xi: f64) -> Result<Complex64> {
    if n < 2 {
        return Err(out_of_range("digit count", "at least 2", n));
    }
    let sum: Complex64 = (0..n)
        .map(|j| Complex64::from_polar(1.0, -2.0 * PI * (j as f64 * xi).rem_euclid(1.0)))
        .sum();
    Ok(sum / n as f64)
}

/// `ln x` for positive big integers without overflowing `f64`.
fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().expect("below f64::MAX").ln()
    } else {
        let shift = bits - 64;
        (x >> shift).to_f64().expect("64 bits").ln() + shift as f64 * LN_2
    }
}

fn ln_rational(x: &Rational) -> f64 {
    ln_big(x.numer()) - ln_big(x.denom())
}

/// Upper bound on `|ξ|`: `ρ^-i <= q/p` for `0 < i < r`.
fn magnitude_bound(xi: &Frequency) -> Rational {
    let ratio = xi.ratio();
    let up = Rational::new(ratio.q().clone(), ratio.p().clone());
    xi.coefficients()
        .iter()
        .enumerate()
        .map(|(i, c)| if i == 0 { c.abs() } else { c.abs() * &up })
        .fold(Rational::zero(), |acc, x| acc + x)
}

/// `ρ` rounded up, so bounds computed from it are conservative.
fn rho_up(measure: &MoranMeasure) -> f64 {
    measure.ratio().to_f64() * (1.0 + 1e-12)
}

fn ln_tail_exponent(measure: &MoranMeasure, ln_xi: f64, k: u64) -> f64 {
    let rho = rho_up(measure);
    let m = measure.sup_digit() as f64;
    (PI * (m - 1.0)).ln() + ln_xi + (k as f64 + 1.0) * rho.ln() - (1.0 - rho).ln()
}

/// `exp(π(M-1)|ξ|ρ^(K+1)/(1-ρ)) - 1`, the truncation error after `K`
/// factors. Non-increasing in `k`.
pub fn tail_bound(measure: &MoranMeasure, xi: &Frequency, k: u64) -> f64 {
    if xi.is_zero() {
        return 0.0;
    }
    let ln_xi = ln_rational(&magnitude_bound(xi));
    ln_tail_exponent(measure, ln_xi, k).exp().exp_m1()
}

fn choose_terms(measure: &MoranMeasure, xi: &Frequency, budget: f64) -> Result<u64> {
    if xi.is_zero() {
        return Ok(0);
    }
    let ln_xi = ln_rational(&magnitude_bound(xi));
    let target = budget.ln_1p().ln();
    let rho = rho_up(measure);
    let slope = -rho.ln();
    let needed = (ln_tail_exponent(measure, ln_xi, 0) - target) / slope;
    let mut k = if needed > 0.0 { needed.ceil() as u64 } else { 0 };
    while ln_tail_exponent(measure, ln_xi, k).exp().exp_m1() > budget {
        k += 1;
    }
    if k > 1_000_000 {
        return Err(out_of_range("truncation order", "at most 10^6", k));
    }
    Ok(k)
}

/// Phase coefficients: `ρⁿξ = Σ_{b<r} R_b·ρ^b`.
fn phase_coefficients(xi: &Frequency, n: u64) -> Vec<Rational> {
    let ratio = xi.ratio();
    let r = i64::from(ratio.r());
    let mut out = vec![Rational::zero(); r as usize];
    for (i, c) in xi.coefficients().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (folds, b) = (n as i64 - i as i64).div_mod_floor(&r);
        out[b as usize] += c * rational_pow(ratio.p(), ratio.q(), folds);
    }
    out
}

/// One factor `M_N(θ)` from a phase `θ ≈ phase·2^-F` (mod 1).
fn mask_from_phase(n: u64, phase: &BigInt, frac_bits: u64) -> Complex64 {
    let modulus = BigInt::one() << frac_bits;
    let mut acc = BigInt::zero();
    let mut sum = Complex64::new(0.0, 0.0);
    for _ in 0..n {
        let t = scaled_to_f64(&acc, -(frac_bits as i64));
        sum += Complex64::from_polar(1.0, -2.0 * PI * t);
        acc = (acc + phase).mod_floor(&modulus);
    }
    sum / n as f64
}

struct Product {
    value: Complex64,
    phase_error: f64,
    float_error: f64,
}

fn product(measure: &MoranMeasure, xi: &Frequency, k: u64, frac_bits: u64) -> Result<Product> {
    let ratio = xi.ratio();
    let r = ratio.r();
    let powers: Vec<Fixed> = (0..r)
        .map(|b| {
            if b == 0 {
                Fixed::from_rational(&Rational::one(), frac_bits)
            } else {
                Fixed::root_of_ratio(
                    &num_traits::pow(ratio.p().clone(), b as usize),
                    &num_traits::pow(ratio.q().clone(), b as usize),
                    r,
                    frac_bits,
                )
            }
        })
        .collect();
    let modulus = BigInt::one() << frac_bits;
    let mut value = Complex64::new(1.0, 0.0);
    let mut ln_phase = 0.0;
    let mut ln_float = 0.0;
    for level in 1..=k {
        let digit = measure.digit_at(level)?;
        let coeffs = phase_coefficients(xi, level);
        let mut theta = Fixed::zero(frac_bits);
        for (b, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = if b == 0 {
                Fixed::from_rational(c, frac_bits)
            } else {
                powers[b].scale(c)
            };
            theta = theta.add(&term);
        }
        let phase = theta.mant.mod_floor(&modulus);
        let delta = theta.err_f64();
        let factor = mask_from_phase(digit, &phase, frac_bits);
        value *= factor;
        let d = digit as f64;
        ln_phase += (PI * (d - 1.0) * delta).ln_1p();
        ln_float += ((32.0 + 2.0 * d) * EPS).ln_1p() + (4.0 * EPS).ln_1p();
    }
    // Phase and rounding errors compound multiplicatively; split them so the
    // caller can tell which one a higher precision would shrink.
    let total = (ln_phase + ln_float).exp_m1();
    let float_error = ln_float.exp_m1();
    Ok(Product {
        value,
        phase_error: (total - float_error).max(0.0) * (1.0 + 1e-9),
        float_error: float_error * (1.0 + 1e-9),
    })
}

/// `μ̂(ξ)` for an exact frequency, within `tol`.
///
/// ```
/// use moran::{Frequency, MoranMeasure, fourier::{ft_eval, FtOptions}};
///
/// let m = MoranMeasure::rational_constant(1, 2, 3).unwrap();
/// let zero = Frequency::parse(&m, "2/3").unwrap();
/// let v = ft_eval(&m, &zero, 1e-10, &FtOptions::default()).unwrap();
/// assert!(v.abs() <= 1e-10);
/// ```
pub fn ft_eval(
    measure: &MoranMeasure,
    xi: &Frequency,
    tol: f64,
    options: &FtOptions,
) -> Result<CertifiedComplex> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(out_of_range("tolerance", "positive and finite", tol));
    }
    if xi.ratio() != measure.ratio() {
        return Err(Error::RatioMismatch);
    }
    let half = tol / 2.0;
    let k = choose_terms(measure, xi, half)?;
    let tail = tail_bound(measure, xi, k);

    let ln_xi = if xi.is_zero() {
        0.0
    } else {
        ln_rational(&magnitude_bound(xi)).max(0.0)
    };
    // Phase error per factor is about 2^(log2|ξ| + log2(ratio) - F); ask for
    // enough bits that the sum over all factors stays well below tol/4.
    let ratio_bits = ln_rational(&Rational::new(
        measure.ratio().q().clone(),
        measure.ratio().p().clone(),
    )) / LN_2;
    let demand = ln_xi / LN_2
        + ratio_bits
        + ((k.max(1) * measure.sup_digit()) as f64).log2()
        + (1.0 / tol).log2()
        + 16.0;
    let mut frac_bits = options.precision_bits.max(demand.ceil() as u64);
    loop {
        if frac_bits > options.max_precision_bits {
            return Err(Error::PrecisionExceeded {
                required: frac_bits,
                cap: options.max_precision_bits,
            });
        }
        let p = product(measure, xi, k, frac_bits)?;
        if p.float_error > half {
            return Err(Error::ToleranceUnattainable {
                tol,
                floor: p.float_error,
            });
        }
        if p.phase_error + p.float_error <= half {
            return Ok(CertifiedComplex {
                value: p.value,
                error_bound: p.phase_error + p.float_error + tail,
                terms: k,
                precision_bits: frac_bits,
            });
        }
        frac_bits *= 2;
    }
}

/// [`ft_eval`] at a double, read as the exact dyadic rational it stores.
pub fn ft_eval_f64(
    measure: &MoranMeasure,
    xi: f64,
    tol: f64,
    options: &FtOptions,
) -> Result<CertifiedComplex> {
    let exact = Rational::from_float(xi).ok_or_else(|| out_of_range("xi", "finite", xi))?;
    ft_eval(measure, &Frequency::rational(measure.ratio(), exact), tol, options)
}

/// [`ft_eval`] at a real known to relative accuracy
/// [`ApproxReal::relative_error_bound`]. The input uncertainty `Δ` moves
/// `μ̂` by at most `π(M-1)·Δ·ρ/(1-ρ)`, which is added to the error bound.
pub fn ft_eval_approx(
    measure: &MoranMeasure,
    xi: &ApproxReal,
    tol: f64,
    options: &FtOptions,
) -> Result<CertifiedComplex> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(out_of_range("tolerance", "positive and finite", tol));
    }
    let exact = xi.to_rational();
    let delta = xi.to_f64().abs() * xi.relative_error_bound() * (1.0 + 1e-9);
    let rho = rho_up(measure);
    let input = PI * (measure.sup_digit() as f64 - 1.0) * delta * rho / (1.0 - rho);
    if !(input < tol / 2.0) {
        return Err(Error::ToleranceUnattainable { tol, floor: input });
    }
    let mut v = ft_eval(
        measure,
        &Frequency::rational(measure.ratio(), exact),
        tol - input,
        options,
    )?;
    v.error_bound += input;
    Ok(v)
}

/// One grid point of [`sample_ft`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRow {
    pub xi: f64,
    pub result: Result<CertifiedComplex>,
}

/// `count` equally spaced points from `xi_min` to `xi_max` inclusive, in
/// ascending order. Grid points are exact rationals between the two
/// endpoints; a row whose evaluation fails carries the error.
pub fn sample_ft(
    measure: &MoranMeasure,
    xi_min: f64,
    xi_max: f64,
    count: usize,
    tol: f64,
    options: &FtOptions,
) -> Result<Vec<SampleRow>> {
    if count < 2 {
        return Err(out_of_range("count", "at least 2", count));
    }
    let lo = Rational::from_float(xi_min).ok_or_else(|| out_of_range("from", "finite", xi_min))?;
    let hi = Rational::from_float(xi_max).ok_or_else(|| out_of_range("to", "finite", xi_max))?;
    if lo >= hi {
        return Err(out_of_range("grid", "from < to", format!("{xi_min} .. {xi_max}")));
    }
    let step = (&hi - &lo) / Rational::from_integer(BigInt::from(count - 1));
    Ok((0..count)
        .into_par_iter()
        .map(|i| {
            let x = &lo + &step * Rational::from_integer(BigInt::from(i));
            let xi = x.to_f64().unwrap_or(f64::NAN);
            let f = Frequency::rational(measure.ratio(), x);
            SampleRow {
                xi,
                result: ft_eval(measure, &f, tol, options),
            }
        })
        .collect())
}

/// Writes `xi,re,im,abs,err` rows with 17 significant digits. Failed rows
/// print `NaN` in every value column.
pub fn write_csv<W: io::Write>(rows: &[SampleRow], mut out: W) -> io::Result<()> {
    out.write_all(b"xi,re,im,abs,err\n")?;
    for row in rows {
        let (re, im, abs, err) = match &row.result {
            Ok(v) => (v.re(), v.im(), v.abs(), v.error_bound),
            Err(_) => (f64::NAN, f64::NAN, f64::NAN, f64::NAN),
        };
        writeln!(out, "{:.16e},{re:.16e},{im:.16e},{abs:.16e},{err:.16e}", row.xi)?;
    }
    Ok(())
}
