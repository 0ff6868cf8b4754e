use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{CappedPoly, Multilinear};
use crate::scalar::Scalar;

pub const MAX_DERIVATIVE_N: usize = 8;
pub const MAX_DERIVATIVE_R: usize = 4;

/// `det A(S)` for every subset `S` (kept rows and columns), indexed by mask.
pub(crate) fn kept_minors<S: Scalar>(a: &Matrix<S>) -> Vec<S> {
    let n = a.n();
    (0u32..1 << n)
        .map(|mask| {
            let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            a.select(&idx).determinant()
        })
        .collect()
}

/// `det[A + Z] = sum_S z^S det[A_S]` with `A_S` the removed submatrix.
pub(crate) fn det_a_plus_z<S: Scalar>(a: &Matrix<S>) -> Multilinear<S> {
    let n = a.n();
    let full = (1u32 << n) - 1;
    let minors = kept_minors(a);
    Multilinear::from_terms(
        n,
        (0u32..1 << n).map(|mask| (mask, minors[(full & !mask) as usize].clone())),
    )
}

/// `det_r` for a positive integer `r` as the coefficient of
/// `prod_i z_i^{r-1}` in `det[A + Z]^r`, computed modulo `z_i^r`.
///
/// Differentiating `r - 1` times in each variable and dividing by
/// `((r-1)!)^n` extracts exactly this coefficient.
pub fn det_r_derivative<S: Scalar>(a: &Matrix<S>, r: usize) -> Result<S> {
    let n = a.n();
    if n > MAX_DERIVATIVE_N {
        return Err(Error::size(
            "det_r_derivative dimension",
            MAX_DERIVATIVE_N as u128,
            n as u128,
        ));
    }
    if r == 0 || r > MAX_DERIVATIVE_R {
        return Err(Error::size(
            "det_r_derivative exponent",
            MAX_DERIVATIVE_R as u128,
            r as u128,
        ));
    }
    if n == 0 {
        return Ok(S::one());
    }
    if r == 1 {
        return Ok(a.determinant());
    }
    let f = det_a_plus_z(a);
    let p = CappedPoly::power_of_multilinear(&f, r, vec![r - 1; n])?;
    Ok(p.coeff(&vec![r - 1; n]))
}
