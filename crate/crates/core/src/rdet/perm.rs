use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Ring;

pub const MAX_PERM_N: usize = 10;

/// `det_r(A) = sum_σ prod_i a_{iσ(i)} (-1)^{n - c(σ)} r^{c(σ)}` where
/// `c(σ)` counts cycles. Works over any commutative ring, so matrices of
/// polynomials are fine.
///
/// The sum over `σ(0)` is split across threads and reduced in order, so the
/// result does not depend on the thread count.
pub fn det_r_perm<R: Ring>(a: &Matrix<R>, r: &R) -> Result<R> {
    let n = a.n();
    if n > MAX_PERM_N {
        return Err(Error::size("det_r_perm dimension", MAX_PERM_N as u128, n as u128));
    }
    if n == 0 {
        return Ok(R::one());
    }
    // weight[c] = (-1)^(n-c) r^c
    let mut weight = Vec::with_capacity(n + 1);
    let mut rc = R::one();
    for c in 0..=n {
        let w = if (n - c).is_multiple_of(2) {
            rc.clone()
        } else {
            -rc.clone()
        };
        weight.push(w);
        rc = rc * r.clone();
    }
    let partial: Vec<R> = (0..n)
        .into_par_iter()
        .map(|j| {
            let first = a.get(0, j);
            if first.is_zero() {
                return R::zero();
            }
            let mut sigma = vec![usize::MAX; n];
            let mut used = vec![false; n];
            sigma[0] = j;
            used[j] = true;
            let mut acc = R::zero();
            walk(a, &weight, 1, first.clone(), &mut sigma, &mut used, &mut acc);
            acc
        })
        .collect();
    Ok(partial.into_iter().fold(R::zero(), |s, v| s + v))
}

fn walk<R: Ring>(
    a: &Matrix<R>,
    weight: &[R],
    row: usize,
    prod: R,
    sigma: &mut [usize],
    used: &mut [bool],
    acc: &mut R,
) {
    let n = a.n();
    if row == n {
        let c = cycle_count(sigma);
        *acc = acc.clone() + prod * weight[c].clone();
        return;
    }
    for j in 0..n {
        if used[j] {
            continue;
        }
        let e = a.get(row, j);
        if e.is_zero() {
            continue;
        }
        used[j] = true;
        sigma[row] = j;
        walk(a, weight, row + 1, prod.clone() * e.clone(), sigma, used, acc);
        used[j] = false;
    }
}

pub fn cycle_count(sigma: &[usize]) -> usize {
    let mut seen = vec![false; sigma.len()];
    let mut c = 0;
    for s in 0..sigma.len() {
        if seen[s] {
            continue;
        }
        c += 1;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = sigma[i];
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;
    use num_rational::BigRational;

    fn q(rows: &[&[i64]]) -> Matrix<BigRational> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rational(v, 1)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn two_by_two_expansion() {
        // r^2 ad - r bc
        let a = q(&[&[3, 5], &[7, 11]]);
        let r = rational(2, 1);
        assert_eq!(det_r_perm(&a, &r).unwrap(), rational(4 * 33 - 2 * 35, 1));
        assert_eq!(det_r_perm(&q(&[&[0, 1], &[1, 0]]), &r).unwrap(), rational(-2, 1));
    }

    #[test]
    fn identity_gives_power_of_r() {
        let r = rational(3, 2);
        let i4 = Matrix::<BigRational>::identity(4);
        assert_eq!(det_r_perm(&i4, &r).unwrap(), rational(81, 16));
    }

    #[test]
    fn r_one_is_determinant() {
        let a = q(&[&[2, -1, 0, 3], &[1, 3, 1, 0], &[0, 1, 4, -2], &[5, 0, 1, 1]]);
        assert_eq!(det_r_perm(&a, &rational(1, 1)).unwrap(), a.determinant());
    }

    #[test]
    fn edge_sizes() {
        assert_eq!(
            det_r_perm(&Matrix::<BigRational>::zeros(0), &rational(2, 1)).unwrap(),
            rational(1, 1)
        );
        let big = Matrix::<f64>::identity(11);
        assert!(matches!(det_r_perm(&big, &2.0), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn cycles() {
        assert_eq!(cycle_count(&[0, 1, 2]), 3);
        assert_eq!(cycle_count(&[1, 0, 2]), 2);
        assert_eq!(cycle_count(&[1, 2, 0]), 1);
    }
}
