//! Polynomials of degree at most one in each of `z_0 .. z_{n-1}`.
//!
//! Monomials are bit masks. Products are taken in the quotient ring where
//! `z_i^2 = 0`, i.e. terms with overlapping supports are dropped; for
//! products of polynomials with disjoint variable sets this is the ordinary
//! product.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::linalg::{submatrix_removed, Matrix};
use crate::poly::univariate::Poly;
use crate::scalar::{Ring, Scalar};

pub const MAX_VARS: usize = 24;

#[derive(Clone, PartialEq)]
pub struct Multilinear<R> {
    nvars: usize,
    terms: BTreeMap<u32, R>,
}

/// Multilinear polynomial with ordinary multiplication semantics for
/// disjoint supports.
pub type MultilinearPoly<R> = Multilinear<R>;

/// Same representation, read in the ring `z_i^2 = 0`.
pub type TruncatedMultilinear<R> = Multilinear<R>;

/// Rings over which scalars of type `S` act; needed for the series in
/// [`truncated_power`].
pub trait Algebra<S>: Ring {
    fn scale_by(&self, c: &S) -> Self;
    /// True when the value is zero up to the arithmetic's noise level.
    fn negligible(&self) -> bool;
}

impl<S: Scalar> Algebra<S> for S {
    fn scale_by(&self, c: &S) -> Self {
        self.clone() * c.clone()
    }
    fn negligible(&self) -> bool {
        if S::EXACT {
            self.is_zero()
        } else {
            self.modulus() <= 1e-12
        }
    }
}

impl<S: Scalar> Algebra<S> for Poly<S> {
    fn scale_by(&self, c: &S) -> Self {
        self.scale(c)
    }
    fn negligible(&self) -> bool {
        self.coeffs().iter().all(Algebra::<S>::negligible)
    }
}

fn mask_of(vars: &[usize]) -> u32 {
    vars.iter().fold(0, |m, &i| m | (1 << i))
}

/// Indices of the set bits, ascending.
pub fn mask_to_set(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

pub fn set_to_mask(set: &[usize]) -> u32 {
    mask_of(set)
}

impl<R: Ring> Multilinear<R> {
    pub fn zero_with(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "too many variables");
        Multilinear {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: R) -> Self {
        Self::monomial(nvars, 0, c)
    }

    pub fn monomial(nvars: usize, mask: u32, c: R) -> Self {
        let mut p = Self::zero_with(nvars);
        p.add_term(mask, c);
        p
    }

    /// `z_i`
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(nvars, 1 << i, R::one())
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (u32, R)>) -> Self {
        let mut p = Self::zero_with(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, mask: u32, c: R) {
        debug_assert!(self.nvars >= 32 || mask >> self.nvars == 0);
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&mask) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(mask, s);
                }
            }
            None => {
                self.terms.insert(mask, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<u32, R> {
        &self.terms
    }

    pub fn coeff(&self, mask: u32) -> R {
        self.terms.get(&mask).cloned().unwrap_or_else(R::zero)
    }

    pub fn coeff_of(&self, set: &[usize]) -> R {
        self.coeff(mask_of(set))
    }

    pub fn constant_term(&self) -> R {
        self.coeff(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn with_nvars(mut self, nvars: usize) -> Self {
        self.nvars = self.nvars.max(nvars);
        self
    }

    pub fn map<T: Ring>(&self, f: impl Fn(&R) -> T) -> Multilinear<T> {
        Multilinear::from_terms(self.nvars, self.terms.iter().map(|(&m, c)| (m, f(c))))
    }

    /// `∂^S` for the variable set `mask`.
    pub fn differentiate(&self, mask: u32) -> Self {
        Multilinear::from_terms(
            self.nvars,
            self.terms
                .iter()
                .filter(|(&m, _)| m & mask == mask)
                .map(|(&m, c)| (m & !mask, c.clone())),
        )
    }

    pub fn eval(&self, point: &[R]) -> R {
        self.terms.iter().fold(R::zero(), |acc, (&m, c)| {
            let mono = mask_to_set(m).into_iter().fold(c.clone(), |p, i| p * point[i].clone());
            acc + mono
        })
    }

    /// Sets `z_i = v`.
    pub fn substitute(&self, i: usize, v: &R) -> Self {
        let bit = 1u32 << i;
        let mut out = Self::zero_with(self.nvars);
        for (&m, c) in &self.terms {
            if m & bit != 0 {
                out.add_term(m & !bit, c.clone() * v.clone());
            } else {
                out.add_term(m, c.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|a| a.clone() * c.clone())
    }

    fn product(&self, rhs: &Self) -> Self {
        let nvars = self.nvars.max(rhs.nvars);
        let mut out = Self::zero_with(nvars);
        let (small, big) = if self.len() <= rhs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let full: u32 = if nvars >= 32 { u32::MAX } else { (1u32 << nvars) - 1 };
        // enumerate submasks of the complement when `big` is dense
        let dense = (big.len() as f64) > (1u64 << nvars.min(40)) as f64 / 4.0;
        for (&a, ca) in &small.terms {
            if dense {
                let comp = full & !a;
                let mut sub = comp;
                loop {
                    if let Some(cb) = big.terms.get(&sub) {
                        out.add_term(a | sub, ca.clone() * cb.clone());
                    }
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & comp;
                }
            } else {
                for (&b, cb) in &big.terms {
                    if a & b == 0 {
                        out.add_term(a | b, ca.clone() * cb.clone());
                    }
                }
            }
        }
        out
    }
}

impl<R: Ring> Add for Multilinear<R> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self.nvars = self.nvars.max(rhs.nvars);
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<R: Ring> Sub for Multilinear<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<R: Ring> Neg for Multilinear<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Multilinear {
            nvars: self.nvars,
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl<R: Ring> Mul for Multilinear<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.product(&rhs)
    }
}

impl<R: Ring> Ring for Multilinear<R> {
    fn zero() -> Self {
        Multilinear::zero_with(0)
    }
    fn one() -> Self {
        Multilinear::constant(0, R::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn from_i64(v: i64) -> Self {
        Multilinear::constant(0, R::from_i64(v))
    }
}

impl<R: Ring> std::fmt::Debug for Multilinear<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map()
            .entries(self.terms.iter().map(|(m, c)| (mask_to_set(*m), c)))
            .finish()
    }
}

/// `f^r = exp(r log f)` in the ring `z_i^2 = 0`. Both series terminate
/// because `f - 1` is nilpotent of order `nvars + 1`, so the result is exact
/// for exact arithmetic.
pub fn truncated_power<S, R>(f: &Multilinear<R>, r: &S) -> Result<Multilinear<R>>
where
    S: Scalar,
    R: Algebra<S>,
{
    let c0 = f.constant_term();
    if !(c0.clone() - R::one()).negligible() {
        return Err(Error::ConstantTermNotOne);
    }
    let nvars = f.nvars();
    let mut g = f.clone();
    g.terms.remove(&0);

    // log(1 + g) = sum_{k>=1} (-1)^{k+1} g^k / k
    let mut log = Multilinear::zero_with(nvars);
    let mut gk = g.clone();
    let mut k = 1usize;
    while !gk.is_empty() && k <= nvars + 1 {
        let sign = if k % 2 == 1 { S::one() } else { -S::one() };
        let c = sign / S::from_usize(k);
        log = log + gk.map(|v| v.scale_by(&c));
        gk = gk * g.clone();
        k += 1;
    }

    let h = log.map(|v| v.scale_by(r));
    let mut out = Multilinear::constant(nvars, R::one());
    let mut hk = Multilinear::constant(nvars, R::one());
    let mut k = 1usize;
    loop {
        hk = (hk * h.clone()).map(|v| v.scale_by(&(S::one() / S::from_usize(k))));
        if hk.is_empty() || k > nvars + 1 {
            break;
        }
        out = out + hk.clone();
        k += 1;
    }
    Ok(out)
}

/// `det[xI + W - A]` expanded in `W = diag(w)`: the coefficient of `w^S` is
/// the characteristic polynomial of `A_S` (rows and columns of `S` removed).
/// Each coefficient is found by evaluating `det(xI - A_S)` at `x = 0..m` and
/// interpolating.
pub fn multilinear_det<S: Scalar>(a: &Matrix<S>) -> Result<Multilinear<Poly<S>>> {
    let n = a.n();
    if n > 14 {
        return Err(Error::size("multilinear_det variables", 14, n as u128));
    }
    let mut out = Multilinear::zero_with(n);
    for mask in 0u32..(1 << n) {
        let removed = mask_to_set(mask);
        let sub = submatrix_removed(a, &removed)?;
        let m = sub.n();
        let nodes: Vec<S> = (0..=m).map(S::from_usize).collect();
        let values: Vec<S> = nodes.iter().map(|x| (-&sub).shift_diag(x).determinant()).collect();
        out.add_term(mask, Poly::interpolate(&nodes, &values)?);
    }
    Ok(out)
}

/// `P(∂) f` followed by `W = 0`, for `f` in the shifted variables of
/// [`multilinear_det`]: `sum_S P_S f_S`.
pub fn apply_diff_operator<S: Scalar>(p: &Multilinear<S>, f: &Multilinear<Poly<S>>) -> Result<Poly<S>> {
    if p.nvars() != f.nvars() {
        return Err(Error::VariableMismatch {
            left: p.nvars(),
            right: f.nvars(),
        });
    }
    Ok(p.terms().iter().fold(Poly::zero(), |acc, (&m, c)| {
        acc + f.differentiate(m).constant_term().scale(c)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::char_poly;
    use crate::scalar::rational;
    use num_rational::BigRational;

    type Q = BigRational;

    fn ml(nvars: usize, terms: &[(&[usize], (i64, i64))]) -> Multilinear<Q> {
        Multilinear::from_terms(
            nvars,
            terms.iter().map(|(s, (a, b))| (set_to_mask(s), rational(*a, *b))),
        )
    }

    #[test]
    fn truncated_product_drops_squares() {
        let a = ml(2, &[(&[], (1, 1)), (&[0], (1, 1))]);
        let sq = a.clone() * a.clone();
        assert_eq!(sq, ml(2, &[(&[], (1, 1)), (&[0], (2, 1))]));
        let b = ml(2, &[(&[], (1, 1)), (&[1], (1, 1))]);
        assert_eq!(
            a * b,
            ml(2, &[(&[], (1, 1)), (&[0], (1, 1)), (&[1], (1, 1)), (&[0, 1], (1, 1))])
        );
    }

    #[test]
    fn dense_and_sparse_products_agree() {
        let n = 6;
        let dense = Multilinear::from_terms(n, (0u32..64).map(|m| (m, rational(m as i64 % 7 - 3, 1))));
        let sparse = ml(n, &[(&[0], (1, 1)), (&[2, 3], (2, 1)), (&[], (5, 1))]);
        let via_dense = sparse.product(&dense);
        let mut naive = Multilinear::zero_with(n);
        for (&a, ca) in sparse.terms() {
            for (&b, cb) in dense.terms() {
                if a & b == 0 {
                    naive.add_term(a | b, ca.clone() * cb.clone());
                }
            }
        }
        assert_eq!(via_dense, naive);
    }

    #[test]
    fn power_examples() {
        let f = ml(1, &[(&[], (1, 1)), (&[0], (1, 1))]);
        assert_eq!(
            truncated_power(&f, &rational(2, 1)).unwrap(),
            ml(1, &[(&[], (1, 1)), (&[0], (2, 1))])
        );
        let g = ml(2, &[(&[], (1, 1)), (&[0], (1, 1)), (&[1], (1, 1)), (&[0, 1], (1, 1))]);
        let half = truncated_power(&g, &rational(1, 2)).unwrap();
        assert_eq!(
            half,
            ml(2, &[(&[], (1, 1)), (&[0], (1, 2)), (&[1], (1, 2)), (&[0, 1], (1, 4))])
        );
        assert_eq!(half.clone() * half, g);
        assert_eq!(truncated_power(&g, &rational(1, 1)).unwrap(), g);
        let bad = ml(1, &[(&[], (2, 1)), (&[0], (1, 1))]);
        assert!(matches!(
            truncated_power(&bad, &rational(1, 2)),
            Err(Error::ConstantTermNotOne)
        ));
    }

    #[test]
    fn float_power_tolerates_rounding_in_constant() {
        let f = Multilinear::from_terms(1, [(0u32, 1.0 + 1e-14), (1u32, 3.0)]);
        let p = truncated_power(&f, &2.0).unwrap();
        assert!((p.coeff(1) - 6.0).abs() < 1e-12);
    }

    /// Coefficient of `z^S` in `(1 + g)^r` via the binomial series
    /// `sum_k C(r, k) g^k`, an independent route to the same quantity.
    fn binomial_power(f: &Multilinear<Q>, r: &Q) -> Multilinear<Q> {
        let mut g = f.clone();
        g.terms.remove(&0);
        let mut out = Multilinear::constant(f.nvars(), rational(1, 1));
        let mut gk = Multilinear::constant(f.nvars(), rational(1, 1));
        let mut binom = rational(1, 1);
        for k in 1..=f.nvars() {
            binom = binom * (r.clone() - rational(k as i64 - 1, 1)) / rational(k as i64, 1);
            gk = gk * g.clone();
            out = out + gk.scale(&binom);
        }
        out
    }

    #[test]
    fn multilinear_det_examples() {
        let a = Matrix::from_rows(vec![vec![rational(3, 1)]]).unwrap();
        let f = multilinear_det(&a).unwrap();
        assert_eq!(f.coeff(0), Poly::from_i64(&[-3, 1]));
        assert_eq!(f.coeff(1), Poly::from_i64(&[1]));

        let x = Matrix::from_rows(vec![
            vec![rational(0, 1), rational(1, 1)],
            vec![rational(1, 1), rational(0, 1)],
        ])
        .unwrap();
        let f = multilinear_det(&x).unwrap();
        assert_eq!(f.coeff(0b00), Poly::from_i64(&[-1, 0, 1]));
        assert_eq!(f.coeff(0b01), Poly::x());
        assert_eq!(f.coeff(0b10), Poly::x());
        assert_eq!(f.coeff(0b11), Poly::from_i64(&[1]));
    }

    #[test]
    fn apply_diff_operator_examples() {
        let a = Matrix::diag(&[rational(2, 1), rational(5, 1)]);
        let f = multilinear_det(&a).unwrap();
        let p = ml(2, &[(&[0], (1, 1))]);
        assert_eq!(apply_diff_operator(&p, &f).unwrap(), Poly::from_i64(&[-5, 1]));
        let one = ml(2, &[(&[], (1, 1))]);
        assert_eq!(apply_diff_operator(&one, &f).unwrap(), char_poly(&a));
        let avg = ml(2, &[(&[0], (1, 2)), (&[1], (1, 2))]);
        assert_eq!(
            apply_diff_operator(&avg, &f).unwrap(),
            Poly::new(vec![rational(-7, 2), rational(1, 1)])
        );
        assert!(apply_diff_operator(&ml(3, &[]), &f).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_unit_constant(nvars: usize) -> impl Strategy<Value = Multilinear<Q>> {
            proptest::collection::vec(-4i64..=4, (1usize << nvars) - 1).prop_map(move |cs| {
                let mut f = Multilinear::constant(nvars, rational(1, 1));
                for (k, c) in cs.into_iter().enumerate() {
                    f.add_term(k as u32 + 1, rational(c, 2));
                }
                f
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn power_is_additive_in_exponent(f in arb_unit_constant(3), a in -6i64..6, b in -6i64..6) {
                let r1 = rational(a, 3);
                let r2 = rational(b, 4);
                let lhs = truncated_power(&f, &(r1.clone() + r2.clone())).unwrap();
                let rhs = truncated_power(&f, &r1).unwrap() * truncated_power(&f, &r2).unwrap();
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn power_matches_binomial_series(f in arb_unit_constant(3), a in -9i64..9) {
                let r = rational(a, 5);
                prop_assert_eq!(truncated_power(&f, &r).unwrap(), binomial_power(&f, &r));
            }

            #[test]
            fn integer_power_matches_repeated_product(f in arb_unit_constant(3), k in 0usize..5) {
                let mut expected = Multilinear::constant(3, rational(1, 1));
                for _ in 0..k {
                    expected = expected * f.clone();
                }
                prop_assert_eq!(truncated_power(&f, &rational(k as i64, 1)).unwrap(), expected);
            }

            #[test]
            fn coefficients_are_removed_char_polys(entries in proptest::collection::vec(-4i64..=4, 6)) {
                // symmetric 3x3 from the upper triangle
                let idx = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];
                let a = Matrix::from_fn(3, |i, j| rational(entries[idx[i][j]], 2));
                let f = multilinear_det(&a).unwrap();
                for mask in 0u32..8 {
                    let sub = submatrix_removed(&a, &mask_to_set(mask)).unwrap();
                    prop_assert_eq!(f.coeff(mask), char_poly(&sub));
                }
            }
        }
    }
}
