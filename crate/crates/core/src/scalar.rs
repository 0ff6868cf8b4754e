//! Number systems used throughout the crate.
//!
//! [`Ring`] is the minimal commutative-ring interface needed by permutation
//! expansions and polynomial arithmetic; it is implemented by scalars as well
//! as by polynomial types, so the same determinant code runs over matrices of
//! numbers, of univariate polynomials, and of multilinear polynomials.
//!
//! [`Scalar`] adds field division and the conversions between the two
//! arithmetic modes: exact Gaussian rationals ([`GaussRational`]) and double
//! precision complex floats ([`Complex64`]). Real rationals and `f64` are
//! scalars too.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};

/// Exact complex numbers with rational real and imaginary parts.
pub type GaussRational = Complex<BigRational>;

pub trait Ring:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(v: i64) -> Self;
}

pub trait Scalar: Ring + Div<Output = Self> {
    /// True for exact arithmetic.
    const EXACT: bool;

    fn from_rational(q: &BigRational) -> Self;

    /// Exact types snap `x` to the simplest rational within `1e-15`
    /// relative error (see [`rationalize`]).
    fn from_f64(x: f64) -> Self;

    fn conj(&self) -> Self;
    fn re_f64(&self) -> f64;
    fn im_f64(&self) -> f64;
    fn modulus(&self) -> f64;

    /// Real part as an exact rational (float modes go through [`rationalize`]).
    fn re_rational(&self) -> BigRational;

    /// True when the imaginary part is exactly zero (exact modes) or below
    /// `tol` in absolute value (float modes).
    fn is_real(&self, tol: f64) -> bool;

    fn as_positive_integer(&self) -> Option<u32> {
        if !self.is_real(1e-12) {
            return None;
        }
        let re = self.re_f64();
        let k = re.round();
        if k < 1.0 || k > u32::MAX as f64 {
            return None;
        }
        if Self::EXACT {
            let q = self.re_rational();
            q.is_integer().then_some(k as u32)
        } else {
            ((re - k).abs() < 1e-12).then_some(k as u32)
        }
    }

    fn from_usize(v: usize) -> Self {
        Self::from_i64(v as i64)
    }
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // numerator/denominator too large for a direct conversion
        let n = q.numer().bits() as i64;
        let d = q.denom().bits() as i64;
        let shift = (n - d).clamp(-1000, 1000);
        let scaled = if shift > 0 {
            q / BigRational::from_integer(BigInt::from(2).pow(shift as u32))
        } else {
            q * BigRational::from_integer(BigInt::from(2).pow((-shift) as u32))
        };
        scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
    })
}

/// Simplest rational (continued-fraction convergent) within `1e-15`
/// relative error of `x`; falls back to the exact binary value.
pub fn rationalize(x: f64) -> BigRational {
    rationalize_tol(x, 1e-15)
}

pub fn rationalize_tol(x: f64, rel_tol: f64) -> BigRational {
    if x == 0.0 || !x.is_finite() {
        return <BigRational as num_traits::Zero>::zero();
    }
    let tol = rel_tol * x.abs().max(1.0);
    let sign = if x < 0.0 { -1 } else { 1 };
    let ax = x.abs();
    // convergents h/k
    let (mut h0, mut h1): (i128, i128) = (0, 1);
    let (mut k0, mut k1): (i128, i128) = (1, 0);
    let mut rem = ax;
    for _ in 0..64 {
        let a = rem.floor();
        if a > 1e18 {
            break;
        }
        let a = a as i128;
        let h2 = a.checked_mul(h1).and_then(|v| v.checked_add(h0));
        let k2 = a.checked_mul(k1).and_then(|v| v.checked_add(k0));
        let (Some(h2), Some(k2)) = (h2, k2) else { break };
        if k2 > 1_000_000_000_000_000_000 {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        if ((h1 as f64) / (k1 as f64) - ax).abs() <= tol {
            return BigRational::new(BigInt::from(sign * h1), BigInt::from(k1));
        }
        let frac = rem - a as f64;
        if frac <= 0.0 {
            break;
        }
        rem = 1.0 / frac;
    }
    BigRational::from_float(x).unwrap_or_else(<BigRational as num_traits::Zero>::zero)
}

/// Parses `"3"`, `"-1/2"`, `"0.25"`, or `"1e-3"` as an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let err = || Error::Parse(format!("not a rational number: {s:?}"));
    if s.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if num_traits::Zero::is_zero(&d) {
            return Err(err());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| err())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().map_err(|_| err())?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut q = BigRational::from_integer(all);
    if scale >= 0 {
        q *= BigRational::from_integer(ten.pow(scale as u32));
    } else {
        q /= BigRational::from_integer(ten.pow((-scale) as u32));
    }
    Ok(if neg { -q } else { q })
}

/// Canonical string form used in JSON output: `"n"` or `"n/d"`.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl Ring for BigRational {
    fn zero() -> Self {
        <BigRational as num_traits::Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as num_traits::One>::one()
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn from_f64(x: f64) -> Self {
        rationalize(x)
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn re_f64(&self) -> f64 {
        rat_to_f64(self)
    }
    fn im_f64(&self) -> f64 {
        0.0
    }
    fn modulus(&self) -> f64 {
        rat_to_f64(self).abs()
    }
    fn re_rational(&self) -> BigRational {
        self.clone()
    }
    fn is_real(&self, _tol: f64) -> bool {
        true
    }
}

impl Ring for GaussRational {
    fn zero() -> Self {
        Complex::new(Ring::zero(), Ring::zero())
    }
    fn one() -> Self {
        Complex::new(Ring::one(), Ring::zero())
    }
    fn is_zero(&self) -> bool {
        Ring::is_zero(&self.re) && Ring::is_zero(&self.im)
    }
    fn from_i64(v: i64) -> Self {
        Complex::new(BigRational::from_i64(v), Ring::zero())
    }
}

impl Scalar for GaussRational {
    const EXACT: bool = true;
    fn from_rational(q: &BigRational) -> Self {
        Complex::new(q.clone(), Ring::zero())
    }
    fn from_f64(x: f64) -> Self {
        Complex::new(rationalize(x), Ring::zero())
    }
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn re_f64(&self) -> f64 {
        rat_to_f64(&self.re)
    }
    fn im_f64(&self) -> f64 {
        rat_to_f64(&self.im)
    }
    fn modulus(&self) -> f64 {
        self.re_f64().hypot(self.im_f64())
    }
    fn re_rational(&self) -> BigRational {
        self.re.clone()
    }
    fn is_real(&self, _tol: f64) -> bool {
        Ring::is_zero(&self.im)
    }
}

impl Ring for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    fn from_rational(q: &BigRational) -> Self {
        rat_to_f64(q)
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn conj(&self) -> Self {
        *self
    }
    fn re_f64(&self) -> f64 {
        *self
    }
    fn im_f64(&self) -> f64 {
        0.0
    }
    fn modulus(&self) -> f64 {
        self.abs()
    }
    fn re_rational(&self) -> BigRational {
        rationalize(*self)
    }
    fn is_real(&self, _tol: f64) -> bool {
        true
    }
}

impl Ring for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;
    fn from_rational(q: &BigRational) -> Self {
        Complex64::new(rat_to_f64(q), 0.0)
    }
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn re_f64(&self) -> f64 {
        self.re
    }
    fn im_f64(&self) -> f64 {
        self.im
    }
    fn modulus(&self) -> f64 {
        self.norm()
    }
    fn re_rational(&self) -> BigRational {
        rationalize(self.re)
    }
    fn is_real(&self, tol: f64) -> bool {
        self.im.abs() <= tol
    }
}

/// Converts a Gaussian rational to a float complex.
pub fn gauss_to_complex(z: &GaussRational) -> Complex64 {
    Complex64::new(rat_to_f64(&z.re), rat_to_f64(&z.im))
}

pub fn gauss(re: BigRational, im: BigRational) -> GaussRational {
    Complex::new(re, im)
}

/// `base^exp` by repeated multiplication.
pub fn pow<R: Ring>(base: &R, exp: usize) -> R {
    let mut acc = R::one();
    for _ in 0..exp {
        acc = acc * base.clone();
    }
    acc
}

/// `n!` as a scalar.
pub fn factorial<S: Scalar>(n: usize) -> S {
    (1..=n).fold(S::one(), |acc, k| acc * S::from_usize(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("1/2").unwrap(), rational(1, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), rational(-1, 4));
        assert_eq!(parse_rational("3").unwrap(), rational(3, 1));
        assert_eq!(parse_rational("1.5e1").unwrap(), rational(15, 1));
        assert_eq!(parse_rational("2e-2").unwrap(), rational(1, 50));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn rationalize_snaps_to_simple_fractions() {
        assert_eq!(rationalize(1.0 / 3.0), rational(1, 3));
        assert_eq!(rationalize(-0.125), rational(-1, 8));
        assert_eq!(rationalize(0.0), rational(0, 1));
        let pi = rationalize(std::f64::consts::PI);
        assert!((rat_to_f64(&pi) - std::f64::consts::PI).abs() < 1e-15 * 4.0);
    }

    #[test]
    fn integer_detection() {
        assert_eq!(rational(3, 1).as_positive_integer(), Some(3));
        assert_eq!(rational(3, 2).as_positive_integer(), None);
        assert_eq!(rational(0, 1).as_positive_integer(), None);
        assert_eq!(2.0f64.as_positive_integer(), Some(2));
        assert_eq!(Complex64::new(2.0, 0.5).as_positive_integer(), None);
    }

    #[test]
    fn formats_rationals() {
        assert_eq!(format_rational(&rational(-4, 2)), "-2");
        assert_eq!(format_rational(&rational(3, 6)), "1/2");
    }
}
