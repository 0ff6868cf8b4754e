//! Multivariate polynomials with a degree cap per variable.
//!
//! Coefficients live in a dense mixed-radix array. Products drop every
//! monomial that exceeds a cap, which makes this the natural home for
//! truncated powers such as `det[A + Z]^r` modulo `z_i^r`.

use crate::error::{Error, Result};
use crate::poly::multilinear::Multilinear;
use crate::scalar::Ring;

pub const MAX_TERMS: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq)]
pub struct CappedPoly<R> {
    caps: Vec<usize>,
    coeffs: Vec<R>,
}

impl<R: Ring> CappedPoly<R> {
    pub fn zero(caps: Vec<usize>) -> Result<Self> {
        let size = caps.iter().try_fold(1usize, |acc, &c| acc.checked_mul(c + 1));
        match size {
            Some(s) if s <= MAX_TERMS => Ok(CappedPoly {
                caps,
                coeffs: vec![R::zero(); s],
            }),
            _ => Err(Error::size("capped polynomial terms", MAX_TERMS as u128, u128::MAX)),
        }
    }

    pub fn constant(caps: Vec<usize>, c: R) -> Result<Self> {
        let mut p = Self::zero(caps)?;
        p.coeffs[0] = c;
        Ok(p)
    }

    /// Embeds a multilinear polynomial (every cap must be at least 1).
    pub fn from_multilinear(f: &Multilinear<R>, caps: Vec<usize>) -> Result<Self> {
        if caps.len() < f.nvars() || caps.contains(&0) {
            return Err(Error::InvalidArgument(
                "caps must cover every variable with degree >= 1".into(),
            ));
        }
        let mut p = Self::zero(caps)?;
        for (&mask, c) in f.terms() {
            let exps: Vec<usize> = (0..p.nvars()).map(|i| (mask >> i & 1) as usize).collect();
            let k = p.index(&exps);
            p.coeffs[k] = c.clone();
        }
        Ok(p)
    }

    /// Builds from `(exponents, coefficient)` pairs; exponents above the
    /// caps are an error.
    pub fn from_terms(caps: Vec<usize>, terms: &[(Vec<usize>, R)]) -> Result<Self> {
        let mut p = Self::zero(caps)?;
        for (e, c) in terms {
            if e.len() != p.nvars() || e.iter().zip(&p.caps).any(|(a, b)| a > b) {
                return Err(Error::InvalidArgument(format!("exponent {e:?} exceeds caps")));
            }
            let k = p.index(e);
            p.coeffs[k] = p.coeffs[k].clone() + c.clone();
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.caps.len()
    }

    pub fn caps(&self) -> &[usize] {
        &self.caps
    }

    fn index(&self, exps: &[usize]) -> usize {
        let mut k = 0;
        for (i, &e) in exps.iter().enumerate().rev() {
            k = k * (self.caps[i] + 1) + e;
        }
        k
    }

    fn exponents(&self, mut k: usize) -> Vec<usize> {
        self.caps
            .iter()
            .map(|&c| {
                let e = k % (c + 1);
                k /= c + 1;
                e
            })
            .collect()
    }

    pub fn coeff(&self, exps: &[usize]) -> R {
        if exps.len() != self.nvars() || exps.iter().zip(&self.caps).any(|(a, b)| a > b) {
            return R::zero();
        }
        self.coeffs[self.index(exps)].clone()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, &R)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (self.exponents(k), c))
    }

    fn check_same_caps(&self, other: &Self) -> Result<()> {
        if self.caps != other.caps {
            return Err(Error::VariableMismatch {
                left: self.nvars(),
                right: other.nvars(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_caps(other)?;
        Ok(CappedPoly {
            caps: self.caps.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn scale(&self, c: &R) -> Self {
        CappedPoly {
            caps: self.caps.clone(),
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    /// Truncated product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_caps(other)?;
        let mut out = Self::zero(self.caps.clone())?;
        let rhs: Vec<(Vec<usize>, &R)> = other.terms().collect();
        for (ea, ca) in self.terms() {
            'next: for (eb, cb) in &rhs {
                let mut e = ea.clone();
                for i in 0..e.len() {
                    e[i] += eb[i];
                    if e[i] > self.caps[i] {
                        continue 'next;
                    }
                }
                let k = out.index(&e);
                out.coeffs[k] = out.coeffs[k].clone() + ca.clone() * (*cb).clone();
            }
        }
        Ok(out)
    }

    /// Truncated product with a multilinear factor; cheaper than [`mul`]
    /// when the factor is sparse.
    ///
    /// [`mul`]: CappedPoly::mul
    pub fn mul_multilinear(&self, f: &Multilinear<R>) -> Self {
        let mut out = Self::zero(self.caps.clone()).expect("same shape");
        for (ea, ca) in self.terms() {
            'next: for (&mask, cb) in f.terms() {
                let mut e = ea.clone();
                for (i, ei) in e.iter_mut().enumerate() {
                    *ei += (mask >> i & 1) as usize;
                    if *ei > self.caps[i] {
                        continue 'next;
                    }
                }
                let k = out.index(&e);
                out.coeffs[k] = out.coeffs[k].clone() + ca.clone() * cb.clone();
            }
        }
        out
    }

    /// `f^k` truncated at the caps, for a multilinear `f`.
    pub fn power_of_multilinear(f: &Multilinear<R>, k: usize, caps: Vec<usize>) -> Result<Self> {
        let mut p = Self::constant(caps, R::one())?;
        for _ in 0..k {
            p = p.mul_multilinear(f);
        }
        Ok(p)
    }

    /// `∂/∂z_i`; the cap is unchanged.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.caps.clone()).expect("same shape");
        for (mut e, c) in self.terms() {
            if e[i] == 0 {
                continue;
            }
            let factor = R::from_i64(e[i] as i64);
            e[i] -= 1;
            let k = out.index(&e);
            out.coeffs[k] = c.clone() * factor;
        }
        out
    }

    /// `∂^{m_0}_0 ⋯ ∂^{m_{n-1}}_{n-1}` for the multiplicity vector `m`.
    pub fn derivative_multi(&self, mult: &[usize]) -> Self {
        let mut p = self.clone();
        for (i, &m) in mult.iter().enumerate() {
            for _ in 0..m {
                p = p.derivative(i);
            }
        }
        p
    }

    pub fn eval(&self, point: &[R]) -> R {
        let mut acc = R::zero();
        for (e, c) in self.terms() {
            let mut t = c.clone();
            for (i, &ei) in e.iter().enumerate() {
                for _ in 0..ei {
                    t = t * point[i].clone();
                }
            }
            acc = acc + t;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;
    use num_rational::BigRational;

    #[test]
    fn truncation_and_derivatives() {
        let f: Multilinear<BigRational> = Multilinear::from_terms(1, [(0, rational(3, 1)), (1, rational(1, 1))]);
        // (3 + z)^2 = 9 + 6z + z^2, cap 1 drops z^2
        let p = CappedPoly::power_of_multilinear(&f, 2, vec![1]).unwrap();
        assert_eq!(p.coeff(&[0]), rational(9, 1));
        assert_eq!(p.coeff(&[1]), rational(6, 1));
        let full = CappedPoly::power_of_multilinear(&f, 2, vec![2]).unwrap();
        assert_eq!(full.coeff(&[2]), rational(1, 1));
        assert_eq!(full.derivative(0).coeff(&[1]), rational(2, 1));
        assert_eq!(full.eval(&[rational(1, 1)]), rational(16, 1));
        let sq = CappedPoly::from_multilinear(&f, vec![2]).unwrap();
        assert_eq!(sq.mul(&sq).unwrap(), full);
    }

    #[test]
    fn bivariate_evaluation() {
        // (1 + x)(2 + y) with x^1 y^1 caps
        let p = CappedPoly::from_terms(
            vec![1, 1],
            &[
                (vec![0, 0], rational(2, 1)),
                (vec![1, 0], rational(2, 1)),
                (vec![0, 1], rational(1, 1)),
                (vec![1, 1], rational(1, 1)),
            ],
        )
        .unwrap();
        assert_eq!(p.eval(&[rational(1, 1), rational(1, 1)]), rational(6, 1));
        assert_eq!(
            p.derivative_multi(&[1, 1]).eval(&[rational(0, 1), rational(0, 1)]),
            rational(1, 1)
        );
        assert!(CappedPoly::from_terms(vec![1], &[(vec![2], rational(1, 1))]).is_err());
    }
}
