use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::scalar::{format_rational, rationalize, Ring, Scalar};

/// Dense univariate polynomial, coefficients in ascending degree.
///
/// Trailing zeros are always trimmed, so the zero polynomial has no
/// coefficients and `degree()` is `None` for it.
#[derive(Clone, PartialEq)]
pub struct Poly<R> {
    coeffs: Vec<R>,
}

/// Real polynomial with exact rational coefficients; all root analysis
/// happens on this type.
pub type UniPoly = Poly<BigRational>;

impl<R: Ring> Poly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(Ring::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: R) -> Self {
        Poly::new(vec![c])
    }

    /// `x`
    pub fn x() -> Self {
        Poly::new(vec![R::zero(), R::one()])
    }

    /// `x - a`
    pub fn linear_root(a: R) -> Self {
        Poly::new(vec![-a, R::one()])
    }

    /// `x^k`
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![R::zero(); k + 1];
        c[k] = R::one();
        Poly { coeffs: c }
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero_poly(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&R> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &R) -> R {
        self.coeffs
            .iter()
            .rev()
            .fold(R::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * R::from_i64(k as i64))
            .collect();
        Poly::new(coeffs)
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn scale(&self, c: &R) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn map<T: Ring>(&self, f: impl Fn(&R) -> T) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Product of `(x - r)` over the given roots.
    pub fn from_roots(roots: &[R]) -> Self {
        roots
            .iter()
            .fold(Poly::constant(R::one()), |acc, r| acc * Poly::linear_root(r.clone()))
    }
}

impl<S: Scalar> Poly<S> {
    /// Unique polynomial of degree < nodes.len() through the given points
    /// (Newton divided differences).
    pub fn interpolate(nodes: &[S], values: &[S]) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: nodes.len(),
                found: values.len(),
            });
        }
        let m = nodes.len();
        let mut dd: Vec<S> = values.to_vec();
        for level in 1..m {
            for i in (level..m).rev() {
                let den = nodes[i].clone() - nodes[i - level].clone();
                if den.is_zero() {
                    return Err(Error::InvalidArgument("repeated interpolation node".into()));
                }
                dd[i] = (dd[i].clone() - dd[i - 1].clone()) / den;
            }
        }
        let mut p = Poly::constant(dd[m.saturating_sub(1)].clone());
        if m == 0 {
            return Ok(Poly::new(vec![]));
        }
        for i in (0..m - 1).rev() {
            p = p * Poly::linear_root(nodes[i].clone()) + Poly::constant(dd[i].clone());
        }
        Ok(p)
    }

    /// Largest coefficient modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let d = self.clone() - other.clone();
        d.coeffs.iter().map(Scalar::modulus).fold(0.0, f64::max)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(Scalar::modulus).fold(0.0, f64::max)
    }

    /// Converts to a real rational polynomial. Exact modes require every
    /// imaginary part to vanish; float modes tolerate imaginary noise up to
    /// `1e-8` relative to the largest coefficient and rationalize the real
    /// parts.
    pub fn to_real(&self) -> Result<UniPoly> {
        let scale = self.max_abs_coeff().max(1.0);
        let tol = if S::EXACT { 0.0 } else { 1e-8 * scale };
        for c in &self.coeffs {
            if !c.is_real(tol) {
                return Err(Error::InvalidArgument(format!(
                    "polynomial has non-real coefficient (imaginary part {})",
                    c.im_f64()
                )));
            }
        }
        Ok(Poly::new(self.coeffs.iter().map(Scalar::re_rational).collect()))
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(Scalar::re_f64).collect()
    }
}

impl UniPoly {
    pub fn from_f64(coeffs: &[f64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| rationalize(c)).collect())
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| BigRational::from_i64(c)).collect())
    }

    /// Coefficient strings, ascending degree.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::ZeroPolynomial)?;
        let lead = d.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![<BigRational as Ring>::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = rem.last().unwrap().clone() / lead.clone();
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k + i] = rem[k + i].clone() - c.clone() * dc.clone();
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(Ring::is_zero) {
                rem.pop();
            }
        }
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero_poly() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => {
                let inv = <BigRational as Ring>::one() / l.clone();
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }
}

impl<R: Ring> Add for Poly<R> {
    type Output = Poly<R>;
    fn add(self, rhs: Self) -> Self {
        let (mut long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self.coeffs, rhs.coeffs)
        } else {
            (rhs.coeffs, self.coeffs)
        };
        for (a, b) in long.iter_mut().zip(short) {
            *a = a.clone() + b;
        }
        Poly::new(long)
    }
}

impl<R: Ring> Sub for Poly<R> {
    type Output = Poly<R>;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<R: Ring> Neg for Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Self {
        Poly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<R: Ring> Mul for Poly<R> {
    type Output = Poly<R>;
    fn mul(self, rhs: Self) -> Self {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Poly::new(vec![]);
        }
        let mut out = vec![R::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<R: Ring> Ring for Poly<R> {
    fn zero() -> Self {
        Poly { coeffs: vec![] }
    }
    fn one() -> Self {
        Poly::constant(R::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn from_i64(v: i64) -> Self {
        Poly::constant(R::from_i64(v))
    }
}

impl<R: Ring> fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let s = format_rational(c);
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{s}")?,
                1 => write!(f, "({s})x")?,
                _ => write!(f, "({s})x^{k}")?,
            }
        }
        Ok(())
    }
}
