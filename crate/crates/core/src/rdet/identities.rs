//! Residuals of the structural identities for `det_r` and `chi_r`. Each
//! function returns the difference of the two sides, so a correct
//! implementation yields zero (exactly, in exact arithmetic).

use crate::error::{Error, Result};
use crate::linalg::{check_psd, submatrix_kept, submatrix_removed, IndexMultiset, Matrix};
use crate::poly::{mask_to_set, CappedPoly, Multilinear, Poly};
use crate::rdet::derivative::kept_minors;
use crate::rdet::{chi_r, det_r_perm};
use crate::scalar::{factorial, Ring, Scalar};

pub const MAX_MULTILINEARIZATION_N: usize = 6;
pub const MAX_PD_DET_N: usize = 8;

/// Two sides of a scalar identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Sides<S> {
    pub lhs: S,
    pub rhs: S,
}

impl<S: Scalar> Sides<S> {
    pub fn difference(&self) -> S {
        self.lhs.clone() - self.rhs.clone()
    }

    /// `|lhs - rhs| / max(|lhs|, |rhs|, tiny)`.
    pub fn relative(&self) -> f64 {
        let scale = self.lhs.modulus().max(self.rhs.modulus()).max(f64::MIN_POSITIVE);
        self.difference().modulus() / scale
    }
}

fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n)
        .filter(move |m| m.count_ones() as usize == k)
        .map(mask_to_set)
}

/// `r sum_i chi_r[A_i] - chi_r'[A]`, with `A_i` the matrix with row and
/// column `i` removed. Holds for any square matrix.
pub fn thompson_residual<S: Scalar>(a: &Matrix<S>, r: usize) -> Result<Poly<S>> {
    defect_k_residual(a, r, 1)
}

/// `r^k k! sum_{|S| = k} chi_r[A_S] - chi_r^{(k)}[A]`.
pub fn defect_k_residual<S: Scalar>(a: &Matrix<S>, r: usize, k: usize) -> Result<Poly<S>> {
    let n = a.n();
    if k > n {
        return Err(Error::InvalidArgument(format!("defect {k} exceeds dimension {n}")));
    }
    let rs = S::from_usize(r);
    let mut sum = Poly::zero();
    for s in combinations(n, k) {
        sum = sum + chi_r(&submatrix_removed(a, &s)?, &rs)?;
    }
    let coeff = crate::scalar::pow(&rs, k) * factorial::<S>(k);
    let lhs = sum.scale(&coeff);
    let rhs = chi_r(a, &rs)?.nth_derivative(k);
    Ok(lhs - rhs)
}

/// Largest coefficient of `det_r[Z + A] - sum_S z^S r^{|S|} det_r[A_S]`.
/// The left side is expanded symbolically from the cycle sum with
/// multilinear entries.
pub fn multilinearization_residual<S: Scalar>(a: &Matrix<S>, r: usize) -> Result<f64> {
    let n = a.n();
    if n > MAX_MULTILINEARIZATION_N {
        return Err(Error::size(
            "multilinearization dimension",
            MAX_MULTILINEARIZATION_N as u128,
            n as u128,
        ));
    }
    let rs = S::from_usize(r);
    let entries = Matrix::from_fn(n, |i, j| {
        let c = Multilinear::constant(n, a.get(i, j).clone());
        if i == j {
            c + Multilinear::var(n, i)
        } else {
            c
        }
    });
    let lhs = det_r_perm(&entries, &Multilinear::constant(n, rs.clone()))?;
    let mut rhs = Multilinear::zero_with(n);
    for mask in 0u32..1 << n {
        let s = mask_to_set(mask);
        let d = det_r_perm(&submatrix_removed(a, &s)?, &rs)?;
        rhs.add_term(mask, crate::scalar::pow(&rs, s.len()) * d);
    }
    let diff = lhs - rhs;
    Ok(diff.terms().values().map(Scalar::modulus).fold(0.0, f64::max))
}

/// `det[Z - A]` as a multilinear polynomial in `z`.
pub(crate) fn det_z_minus_a<S: Scalar>(a: &Matrix<S>) -> Multilinear<S> {
    let n = a.n();
    let full = (1u32 << n) - 1;
    let minors = kept_minors(&-a);
    Multilinear::from_terms(
        n,
        (0u32..1 << n).map(|mask| (mask, minors[(full & !mask) as usize].clone())),
    )
}

/// Both sides of `∂^S p = p det_2[(Z - A)^{-1}(S)]` for `p = det[Z - A]^2`,
/// evaluated at the diagonal point `z`. Multiplicities above two are
/// rejected; those derivatives vanish identically.
pub fn pd_det_residual<S: Scalar>(a: &Matrix<S>, z: &[S], s: &IndexMultiset) -> Result<Sides<S>> {
    let n = a.n();
    if n > MAX_PD_DET_N {
        return Err(Error::size("pd_det dimension", MAX_PD_DET_N as u128, n as u128));
    }
    if z.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: z.len(),
        });
    }
    s.check_bound(n)?;
    if s.max_multiplicity() > 2 {
        return Err(Error::InvalidArgument("multiplicities must be at most 2".into()));
    }
    let f = det_z_minus_a(a);
    let p = CappedPoly::power_of_multilinear(&f, 2, vec![2; n])?;
    let mult: Vec<usize> = (0..n).map(|i| s.multiplicity(i)).collect();
    let lhs = p.derivative_multi(&mult).eval(z);

    let zm = &Matrix::diag(z) - a;
    let inv = zm.inverse()?;
    let p_at = p.eval(z);
    let rhs = p_at * det_r_perm(&submatrix_kept(&inv, s)?, &S::from_i64(2))?;
    Ok(Sides { lhs, rhs })
}

/// `det_2[B(S)]`; vanishes whenever an index of `S` repeats three or more
/// times.
pub fn vere_jones_vanishing<R: Ring>(b: &Matrix<R>, s: &IndexMultiset) -> Result<R> {
    det_r_perm(&submatrix_kept(b, s)?, &R::from_i64(2))
}

/// `det_r[A_S] det_r[A_T] - det_r[A_{S∩T}] det_r[A_{S∪T}]` with removed
/// submatrices, for positive semidefinite `A`.
pub fn koteljanskii_residual<S: Scalar>(a: &Matrix<S>, r: usize, s: &[usize], t: &[usize]) -> Result<S> {
    check_psd(a)?;
    let rs = S::from_usize(r);
    let inter: Vec<usize> = s.iter().copied().filter(|i| t.contains(i)).collect();
    let mut union: Vec<usize> = s.iter().chain(t).copied().collect();
    union.sort_unstable();
    union.dedup();
    let d = |idx: &[usize]| -> Result<S> { det_r_perm(&submatrix_removed(a, idx)?, &rs) };
    Ok(d(s)? * d(t)? - d(&inter)? * d(&union)?)
}
