use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{multilinear_det, truncated_power, Multilinear, Poly};
use crate::rdet::derivative::kept_minors;
use crate::scalar::Scalar;

pub const MAX_MACMAHON_N: usize = 12;

/// `det_r` for real `r` from the master-theorem identity: `det_r[A]` is
/// `(-1)^n` times the coefficient of `z_0 ⋯ z_{n-1}` in `det[I - ZA]^r`.
///
/// The power is taken in the ring `z_i^2 = 0`, where
/// `det[I - ZA] = sum_S (-1)^{|S|} z^S det A(S)`. The sign: for `n = 1`,
/// `(1 - za)^r` has `z`-coefficient `-ra` while `det_r[a] = ra`.
pub fn det_r_macmahon<S: Scalar>(a: &Matrix<S>, r: &S) -> Result<S> {
    let n = a.n();
    if n > MAX_MACMAHON_N {
        return Err(Error::size(
            "det_r_macmahon dimension",
            MAX_MACMAHON_N as u128,
            n as u128,
        ));
    }
    if n == 0 {
        return Ok(S::one());
    }
    let minors = kept_minors(a);
    let f = Multilinear::from_terms(
        n,
        minors.into_iter().enumerate().map(|(mask, d)| {
            let d = if (mask as u32).count_ones() % 2 == 1 { -d } else { d };
            (mask as u32, d)
        }),
    );
    let power = truncated_power(&f, r)?;
    let top = power.coeff((1u32 << n) - 1);
    Ok(if n % 2 == 1 { -top } else { top })
}

/// `chi_r[A] = det_r[xI - A]` through the same identity with polynomial
/// coefficients: `det[I - Z(xI - A)] = sum_S (-1)^{|S|} z^S chi[A(S)]`.
pub fn chi_r_macmahon<S: Scalar>(a: &Matrix<S>, r: &S) -> Result<Poly<S>> {
    let n = a.n();
    if n > MAX_MACMAHON_N {
        return Err(Error::size(
            "chi_r_macmahon dimension",
            MAX_MACMAHON_N as u128,
            n as u128,
        ));
    }
    if n == 0 {
        return Ok(Poly::constant(S::one()));
    }
    let full = (1u32 << n) - 1;
    // coefficient of w^T in `multilinear_det` is chi[A_T] = chi[A(complement of T)]
    let shifted = multilinear_det(a)?;
    let f = Multilinear::from_terms(
        n,
        (0..=full).map(|mask| {
            let c = shifted.coeff(full & !mask);
            let c = if mask.count_ones() % 2 == 1 { -c } else { c };
            (mask, c)
        }),
    );
    let power = truncated_power(&f, r)?;
    let top = power.coeff(full);
    Ok(if n % 2 == 1 { -top } else { top })
}
