//! Seeded generators for test matrices. Every generator is deterministic in
//! its seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use num_rational::BigRational;

use crate::linalg::Matrix;
use crate::scalar::{gauss, rational, GaussRational, Ring};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stream seed for trial `t` of a run seeded with `seed`, so trials can be
/// evaluated independently and in any order.
pub fn trial_rng(seed: u64, t: u64) -> TestRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(t);
    r
}

/// Multiple of 1/4 in `[-2, 2]`.
pub fn quarter(rng: &mut impl Rng) -> BigRational {
    rational(rng.random_range(-8..=8), 4)
}

/// Real symmetric matrix with entries in `{-2, -7/4, ..., 2}`.
pub fn real_symmetric(rng: &mut impl Rng, n: usize) -> Matrix<BigRational> {
    let mut m = Matrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let v = quarter(rng);
            m.set(i, j, v.clone());
            m.set(j, i, v);
        }
    }
    m
}

/// Complex Hermitian matrix whose off-diagonal real and imaginary parts are
/// multiples of 1/4 in `[-2, 2]`.
pub fn complex_hermitian(rng: &mut impl Rng, n: usize) -> Matrix<GaussRational> {
    let mut m = Matrix::zeros(n);
    for i in 0..n {
        m.set(i, i, gauss(quarter(rng), rational(0, 1)));
        for j in i + 1..n {
            let re = quarter(rng);
            let im = quarter(rng);
            m.set(i, j, gauss(re.clone(), im.clone()));
            m.set(j, i, gauss(re, -im));
        }
    }
    m
}

/// General (non-symmetric) rational matrix with entries in `[-2, 2]`.
pub fn general_rational(rng: &mut impl Rng, n: usize) -> Matrix<BigRational> {
    Matrix::from_fn(n, |_, _| quarter(rng))
}

/// `B^T B` for a random `rank x n` matrix `B` with small rational entries.
pub fn gram(rng: &mut impl Rng, n: usize, rank: usize) -> Matrix<BigRational> {
    let b: Vec<Vec<BigRational>> = (0..rank)
        .map(|_| (0..n).map(|_| rational(rng.random_range(-4..=4), 2)).collect())
        .collect();
    Matrix::from_fn(n, |i, j| {
        (0..rank).fold(<BigRational as Ring>::zero(), |acc, k| {
            acc + b[k][i].clone() * b[k][j].clone()
        })
    })
}

/// Positive semidefinite matrix with spectrum in `[0, 1]`: a Gram matrix
/// divided by its trace (the zero matrix if the Gram matrix vanishes).
pub fn psd_contraction(rng: &mut impl Rng, n: usize) -> Matrix<BigRational> {
    let g = gram(rng, n, n);
    let t = g.trace();
    if t.is_zero() {
        return g;
    }
    g.scale(&(<BigRational as Ring>::one() / t))
}

pub fn to_gauss(m: &Matrix<BigRational>) -> Matrix<GaussRational> {
    m.map(|v| gauss(v.clone(), rational(0, 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{check_psd, max_eigenvalue};

    #[test]
    fn generators_are_deterministic() {
        let a = real_symmetric(&mut rng(5), 4);
        let b = real_symmetric(&mut rng(5), 4);
        assert_eq!(a, b);
        assert_eq!(a, a.transpose());
        let h = complex_hermitian(&mut rng(1), 3);
        assert_eq!(h, h.conj_transpose());
    }

    #[test]
    fn trial_streams_differ() {
        let a = quarter(&mut trial_rng(1, 0));
        let b: Vec<BigRational> = (0..8).map(|t| quarter(&mut trial_rng(1, t))).collect();
        assert_eq!(a, b[0]);
        assert!(b.iter().any(|v| *v != a));
    }

    #[test]
    fn contractions_are_psd_and_bounded() {
        let mut r = rng(11);
        for _ in 0..5 {
            let c = psd_contraction(&mut r, 3);
            check_psd(&c).unwrap();
            assert!(max_eigenvalue(&c).unwrap() <= 1.0 + 1e-12);
        }
    }
}
