use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rdet::det_r_perm;
use crate::scalar::Ring;

pub const MAX_MIXED_ASSIGNMENTS: u128 = 1_000_000;

/// `D(A_1, ..., A_k) = sum over ordered partitions S_1 ⨿ ... ⨿ S_k = [n]` of
/// `prod_i det A_i(S_i)` with kept principal submatrices.
///
/// Evaluated as an iterated subset convolution (`k 3^n` work) rather than by
/// listing all `k^n` assignments.
pub fn mixed_determinant<R: Ring>(mats: &[Matrix<R>]) -> Result<R> {
    let Some(first) = mats.first() else {
        return Err(Error::InvalidArgument(
            "mixed determinant needs at least one matrix".into(),
        ));
    };
    let n = first.n();
    if let Some(m) = mats.iter().find(|m| m.n() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.n(),
        });
    }
    let k = mats.len() as u128;
    let count = k.checked_pow(n as u32).unwrap_or(u128::MAX);
    if count > MAX_MIXED_ASSIGNMENTS {
        return Err(Error::size(
            "mixed determinant partitions",
            MAX_MIXED_ASSIGNMENTS,
            count,
        ));
    }
    let size = 1usize << n;
    let minors = |m: &Matrix<R>| -> Result<Vec<R>> {
        (0..size)
            .map(|mask| {
                let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                det_r_perm(&m.select(&idx), &R::one())
            })
            .collect()
    };
    let mut acc = minors(first)?;
    for m in &mats[1..] {
        let d = minors(m)?;
        let mut next = vec![R::zero(); size];
        for (u, slot) in next.iter_mut().enumerate() {
            let mut s = u;
            loop {
                if !d[s].is_zero() && !acc[u & !s].is_zero() {
                    *slot = slot.clone() + acc[u & !s].clone() * d[s].clone();
                }
                if s == 0 {
                    break;
                }
                s = (s - 1) & u;
            }
        }
        acc = next;
    }
    Ok(acc[size - 1].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::char_poly;
    use crate::poly::Poly;
    use crate::rdet::chi_r;
    use crate::scalar::rational;
    use num_rational::BigRational;

    fn poly_matrix(a: &Matrix<BigRational>, with_x: bool, sign: i64) -> Matrix<Poly<BigRational>> {
        Matrix::from_fn(a.n(), |i, j| {
            let c = Poly::constant(a.get(i, j).clone() * rational(sign, 1));
            if with_x && i == j {
                c + Poly::x()
            } else {
                c
            }
        })
    }

    #[test]
    fn two_scalars() {
        let a = Matrix::from_rows(vec![vec![rational(3, 1)]]).unwrap();
        let b = Matrix::from_rows(vec![vec![rational(4, 1)]]).unwrap();
        assert_eq!(mixed_determinant(&[a, b]).unwrap(), rational(7, 1));
    }

    #[test]
    fn brute_force_enumeration_agrees() {
        let mats: Vec<Matrix<BigRational>> = (0..3)
            .map(|s| Matrix::from_fn(3, |i, j| rational(((i * 3 + j + s * 5) % 7) as i64 - 3, 1)))
            .collect();
        let mut total = rational(0, 1);
        for code in 0..27usize {
            let assign: Vec<usize> = (0..3).map(|i| code / 3usize.pow(i as u32) % 3).collect();
            let mut prod = rational(1, 1);
            for (b, m) in mats.iter().enumerate() {
                let idx: Vec<usize> = (0..3).filter(|&i| assign[i] == b).collect();
                prod *= m.select(&idx).determinant();
            }
            total += prod;
        }
        assert_eq!(mixed_determinant(&mats).unwrap(), total);
    }

    #[test]
    fn char_poly_as_mixed_determinant() {
        let a = Matrix::from_fn(3, |i, j| rational((i as i64 - j as i64).abs() + 1, 2));
        let x = Matrix::from_fn(3, |i, j| if i == j { Poly::x() } else { Poly::zero() });
        let neg = poly_matrix(&a, false, -1);
        assert_eq!(mixed_determinant(&[x, neg]).unwrap(), char_poly(&a));
    }

    #[test]
    fn chi_r_as_mixed_determinant() {
        let a = Matrix::from_fn(3, |i, j| rational(((i + 2 * j) % 3) as i64, 1));
        let shifted = poly_matrix(&a, true, -1);
        for r in 1..=3 {
            let mats = vec![shifted.clone(); r];
            assert_eq!(
                mixed_determinant(&mats).unwrap(),
                chi_r(&a, &rational(r as i64, 1)).unwrap()
            );
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(mixed_determinant::<BigRational>(&[]).is_err());
        let big = vec![Matrix::<f64>::identity(10); 4];
        assert!(matches!(mixed_determinant(&big), Err(Error::SizeLimit { .. })));
    }
}
