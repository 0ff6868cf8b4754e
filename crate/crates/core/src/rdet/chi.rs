use crate::error::Result;
use crate::linalg::Matrix;
use crate::poly::{Poly, UniPoly};
use crate::rdet::{chi_r_macmahon, det_r_perm};
use crate::scalar::Scalar;

/// `chi_r[A](x) = det_r[xI - A]`.
///
/// For a positive integer `r` the polynomial is interpolated from
/// [`det_r_perm`] at `x = 0, 1, ..., n`; other `r` go through the
/// master-theorem expansion with polynomial coefficients.
pub fn chi_r<S: Scalar>(a: &Matrix<S>, r: &S) -> Result<Poly<S>> {
    match r.as_positive_integer() {
        Some(k) => chi_r_interpolated(a, k as usize),
        None => chi_r_macmahon(a, r),
    }
}

/// Interpolation route for a positive integer `r`.
pub fn chi_r_interpolated<S: Scalar>(a: &Matrix<S>, r: usize) -> Result<Poly<S>> {
    let n = a.n();
    let rs = S::from_usize(r);
    let nodes: Vec<S> = (0..=n).map(S::from_usize).collect();
    let values = nodes
        .iter()
        .map(|x| det_r_perm(&(-a).shift_diag(x), &rs))
        .collect::<Result<Vec<S>>>()?;
    Poly::interpolate(&nodes, &values)
}

/// [`chi_r`] as an exact real polynomial, ready for root analysis.
pub fn chi_r_real<S: Scalar>(a: &Matrix<S>, r: &S) -> Result<UniPoly> {
    chi_r(a, r)?.to_real()
}
