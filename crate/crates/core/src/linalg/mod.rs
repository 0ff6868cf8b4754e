//! Dense matrices, principal submatrices, pinchings and spectral helpers.
//!
//! Two submatrix conventions coexist: [`submatrix_removed`] deletes the
//! listed rows and columns (`A_S`), [`submatrix_kept`] keeps them (`A(S)`,
//! multisets allowed). All indices are 0-based.

mod hermitian;
mod index;
mod matrix;

pub use hermitian::{HermitianMatrix, Mode, FLOAT_HERMITIAN_TOL};
pub use index::{IndexMultiset, Paving};
pub use matrix::Matrix;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::poly::{count_roots_at_least, max_root, Poly, UniPoly};
use crate::scalar::{rational, GaussRational, Ring, Scalar};

/// `A_S`: principal submatrix with the rows and columns in `s` deleted.
/// Surviving indices keep their order; duplicates in `s` are ignored.
pub fn submatrix_removed<R: Ring>(a: &Matrix<R>, s: &[usize]) -> Result<Matrix<R>> {
    for &i in s {
        a.check_index(i)?;
    }
    let keep: Vec<usize> = (0..a.n()).filter(|i| !s.contains(i)).collect();
    Ok(a.select(&keep))
}

/// `A(S)`: principal submatrix on the rows and columns of `s`, repeated per
/// multiplicity, in nondecreasing index order.
pub fn submatrix_kept<R: Ring>(a: &Matrix<R>, s: &IndexMultiset) -> Result<Matrix<R>> {
    s.check_bound(a.n())?;
    Ok(a.select(&s.expand()))
}

/// Block-diagonal compression: entries between different blocks are zeroed.
pub fn pinch<R: Ring>(a: &Matrix<R>, x: &Paving) -> Result<Matrix<R>> {
    if x.n() != a.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: x.n(),
        });
    }
    Ok(Matrix::from_fn(a.n(), |i, j| {
        if x.block_of(i) == x.block_of(j) {
            a.get(i, j).clone()
        } else {
            R::zero()
        }
    }))
}

/// `det(xI - A)` by the Faddeev-LeVerrier recursion.
pub fn char_poly<S: Scalar>(a: &Matrix<S>) -> Poly<S> {
    let n = a.n();
    let mut c = vec![S::zero(); n + 1];
    c[n] = S::one();
    let mut m = Matrix::<S>::zeros(n);
    for k in 1..=n {
        m = (a * &m).shift_diag(&c[n - k + 1]);
        let am = a * &m;
        c[n - k] = -(am.trace() / S::from_usize(k));
    }
    Poly::new(c)
}

/// Characteristic polynomial as an exact real polynomial (float modes are
/// rationalized; complex coefficients are an error).
pub fn char_poly_real<S: Scalar>(a: &Matrix<S>) -> Result<UniPoly> {
    char_poly(a).to_real()
}

/// Eigenvalues of a Hermitian matrix in ascending order, in double
/// precision.
pub fn eigenvalues_f64<S: Scalar>(a: &Matrix<S>) -> Vec<f64> {
    let n = a.n();
    if n == 0 {
        return Vec::new();
    }
    let m = DMatrix::<Complex64>::from_fn(n, n, |i, j| {
        let z = a.get(i, j);
        Complex64::new(z.re_f64(), z.im_f64())
    });
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Largest eigenvalue of a Hermitian matrix. Exact matrices go through
/// root isolation of the characteristic polynomial.
pub fn max_eigenvalue<S: Scalar>(a: &Matrix<S>) -> Result<f64> {
    if S::EXACT {
        max_root(&char_poly_real(a)?)
    } else {
        eigenvalues_f64(a).last().copied().ok_or(Error::NoRealRoots)
    }
}

pub fn min_eigenvalue<S: Scalar>(a: &Matrix<S>) -> Result<f64> {
    if S::EXACT {
        let p = char_poly_real(a)?;
        let roots = crate::poly::real_roots(&p)?;
        roots.first().map(|r| r.0).ok_or(Error::NoRealRoots)
    } else {
        eigenvalues_f64(a).first().copied().ok_or(Error::NoRealRoots)
    }
}

/// Errors unless the smallest eigenvalue is at least `-1e-10`.
pub fn check_psd<S: Scalar>(a: &Matrix<S>) -> Result<()> {
    if a.n() == 0 {
        return Ok(());
    }
    let min_eig = min_eigenvalue(a)?;
    if min_eig < -1e-10 {
        return Err(Error::NotPsd { min_eig });
    }
    Ok(())
}

/// True when `b` lies strictly above every eigenvalue; exact matrices with
/// a real `b` decide this exactly.
pub fn is_above_spectrum<S: Scalar>(a: &Matrix<S>, b: &S) -> Result<bool> {
    if a.n() == 0 {
        return Ok(true);
    }
    if S::EXACT && b.is_real(0.0) {
        Ok(count_roots_at_least(&char_poly_real(a)?, &b.re_rational())? == 0)
    } else {
        Ok(b.re_f64() > max_eigenvalue(a)?)
    }
}

/// `e_i^* (bI - A)^{-1} e_i` for `b` above the spectrum.
pub fn resolvent_diagonal<S: Scalar>(a: &Matrix<S>, b: &S, i: usize) -> Result<S> {
    a.check_index(i)?;
    if !is_above_spectrum(a, b)? {
        return Err(Error::NotAboveRoots {
            b: b.re_f64(),
            lambda_max: max_eigenvalue(a)?,
        });
    }
    let shifted = (-a).shift_diag(b);
    let mut e = vec![S::zero(); a.n()];
    e[i] = S::one();
    let x = shifted.solve(&e)?;
    Ok(x[i].clone())
}

/// Rank-`k` orthogonal projection with constant diagonal `k/n`, built from
/// `k` rows of the `n`-point Fourier matrix.
///
/// When `k` divides `n` the frequencies are the multiples of `n/k`, which
/// gives the exact rational matrix `(k/n)[a = b mod k]`. Otherwise a
/// conjugation-closed frequency set is used and the result is in float mode.
pub fn harmonic_projection(n: usize, k: usize) -> Result<HermitianMatrix> {
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "harmonic projection needs 1 <= k <= n, got n={n}, k={k}"
        )));
    }
    if n.is_multiple_of(k) {
        let val = GaussRational::new(rational(k as i64, n as i64), <BigRational as Ring>::zero());
        let m = Matrix::from_fn(n, |a, b| {
            if (a as i64 - b as i64).rem_euclid(k as i64) == 0 {
                val.clone()
            } else {
                GaussRational::zero()
            }
        });
        return HermitianMatrix::exact(m);
    }
    let freqs: Vec<i64> = if k % 2 == 1 {
        let h = (k as i64 - 1) / 2;
        (-h..=h).collect()
    } else if n.is_multiple_of(2) {
        let h = k as i64 / 2 - 1;
        (-h..=h).chain(std::iter::once(n as i64 / 2)).collect()
    } else {
        (0..k as i64).collect()
    };
    let m = Matrix::from_fn(n, |a, b| {
        if a == b {
            return Complex64::new(k as f64 / n as f64, 0.0);
        }
        let d = a as i64 - b as i64;
        freqs.iter().fold(Complex64::new(0.0, 0.0), |acc, &f| {
            let t = 2.0 * std::f64::consts::PI * ((f * d).rem_euclid(n as i64) as f64) / n as f64;
            acc + Complex64::new(t.cos(), t.sin())
        }) / n as f64
    });
    HermitianMatrix::float(symmetrize(m))
}

fn symmetrize(m: Matrix<Complex64>) -> Matrix<Complex64> {
    Matrix::from_fn(m.n(), |i, j| if i <= j { m[(i, j)] } else { m[(j, i)].conj() })
}
