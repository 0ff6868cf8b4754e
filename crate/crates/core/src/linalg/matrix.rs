use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::{Ring, Scalar};

/// Dense square matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix<R> {
    n: usize,
    data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn new(n: usize, data: Vec<R>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        Ok(Matrix { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix { n, data })
    }

    pub fn zeros(n: usize) -> Self {
        Matrix::from_fn(n, |_, _| R::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, |i, j| if i == j { R::one() } else { R::zero() })
    }

    pub fn diag(d: &[R]) -> Self {
        Matrix::from_fn(d.len(), |i, j| if i == j { d[i].clone() } else { R::zero() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[R]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    pub fn map<T: Ring>(&self, f: impl Fn(&R) -> T) -> Matrix<T> {
        Matrix {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Principal submatrix on the given index list (repeats allowed, no
    /// bounds check beyond the slice index panic).
    pub(crate) fn select(&self, idx: &[usize]) -> Self {
        Matrix::from_fn(idx.len(), |a, b| self.get(idx[a], idx[b]).clone())
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i, n: self.n })
        }
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|a| a.clone() * c.clone())
    }

    /// `self + c I`
    pub fn shift_diag(&self, c: &R) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            let v = m.get(i, i).clone() + c.clone();
            m.set(i, i, v);
        }
        m
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let (n, m) = (self.n, other.n);
        Matrix::from_fn(n + m, |i, j| match (i < n, j < n) {
            (true, true) => self.get(i, j).clone(),
            (false, false) => other.get(i - n, j - n).clone(),
            _ => R::zero(),
        })
    }

    pub fn trace(&self) -> R {
        (0..self.n).fold(R::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn diagonal(&self) -> Vec<R> {
        (0..self.n).map(|i| self.get(i, i).clone()).collect()
    }

    /// `P A P^T` where `P` sends basis vector `i` to `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut inv = vec![0; self.n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        Matrix::from_fn(self.n, |i, j| self.get(inv[i], inv[j]).clone())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j).is_zero()))
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn conj_transpose(&self) -> Self {
        Matrix::from_fn(self.n, |i, j| self.get(j, i).conj())
    }

    /// Largest `|a_ij - conj(a_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev = 0.0f64;
        for i in 0..self.n {
            for j in i..self.n {
                let d = self.get(i, j).clone() - self.get(j, i).conj();
                dev = dev.max(d.modulus());
            }
        }
        dev
    }

    /// Row-reduces `m` in place and returns the determinant. Exact types use
    /// the first nonzero pivot; float types use partial pivoting.
    #[allow(clippy::needless_range_loop)]
    fn eliminate(mut m: Vec<Vec<S>>, mut rhs: Option<&mut Vec<Vec<S>>>) -> S {
        let n = m.len();
        let mut det = S::one();
        for col in 0..n {
            let pivot = if S::EXACT {
                (col..n).find(|&r| !m[r][col].is_zero())
            } else {
                (col..n)
                    .max_by(|&a, &b| m[a][col].modulus().total_cmp(&m[b][col].modulus()))
                    .filter(|&r| !m[r][col].is_zero())
            };
            let Some(p) = pivot else {
                return S::zero();
            };
            if p != col {
                m.swap(p, col);
                if let Some(r) = rhs.as_deref_mut() {
                    r.swap(p, col);
                }
                det = -det;
            }
            let piv = m[col][col].clone();
            det = det * piv.clone();
            for row in col + 1..n {
                if m[row][col].is_zero() {
                    continue;
                }
                let f = m[row][col].clone() / piv.clone();
                for k in col..n {
                    let v = m[row][k].clone() - f.clone() * m[col][k].clone();
                    m[row][k] = v;
                }
                if let Some(r) = rhs.as_deref_mut() {
                    for k in 0..r[row].len() {
                        let v = r[row][k].clone() - f.clone() * r[col][k].clone();
                        r[row][k] = v;
                    }
                }
            }
        }
        if let Some(r) = rhs {
            // back substitution
            let cols = r.first().map_or(0, Vec::len);
            for c in 0..cols {
                for row in (0..n).rev() {
                    let mut acc = r[row][c].clone();
                    for k in row + 1..n {
                        acc = acc - m[row][k].clone() * r[k][c].clone();
                    }
                    r[row][c] = acc / m[row][row].clone();
                }
            }
        }
        det
    }

    fn to_rows(&self) -> Vec<Vec<S>> {
        self.rows().map(<[S]>::to_vec).collect()
    }

    pub fn determinant(&self) -> S {
        Self::eliminate(self.to_rows(), None)
    }

    /// Solves `self X = B` for the given right-hand-side columns.
    fn solve_many(&self, mut b: Vec<Vec<S>>) -> Result<Vec<Vec<S>>> {
        let det = Self::eliminate(self.to_rows(), Some(&mut b));
        if det.is_zero() {
            return Err(Error::Singular);
        }
        Ok(b)
    }

    pub fn solve(&self, b: &[S]) -> Result<Vec<S>> {
        if b.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: b.len(),
            });
        }
        let cols = b.iter().map(|v| vec![v.clone()]).collect();
        Ok(self.solve_many(cols)?.into_iter().map(|mut r| r.remove(0)).collect())
    }

    pub fn inverse(&self) -> Result<Self> {
        let x = self.solve_many(Matrix::<S>::identity(self.n).to_rows())?;
        Ok(Matrix {
            n: self.n,
            data: x.into_iter().flatten().collect(),
        })
    }

    pub fn to_complex64(&self) -> Matrix<Complex64> {
        self.map(|a| Complex64::new(a.re_f64(), a.im_f64()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.clone() - b.clone()).modulus())
            .fold(0.0, f64::max)
    }
}

impl<R> Index<(usize, usize)> for Matrix<R> {
    type Output = R;
    fn index(&self, (i, j): (usize, usize)) -> &R {
        &self.data[i * self.n + j]
    }
}

impl<R: Ring> Add for &Matrix<R> {
    type Output = Matrix<R>;
    fn add(self, rhs: Self) -> Matrix<R> {
        assert_eq!(self.n, rhs.n, "matrix dimensions differ");
        Matrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<R: Ring> Sub for &Matrix<R> {
    type Output = Matrix<R>;
    fn sub(self, rhs: Self) -> Matrix<R> {
        assert_eq!(self.n, rhs.n, "matrix dimensions differ");
        Matrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<R: Ring> Neg for &Matrix<R> {
    type Output = Matrix<R>;
    fn neg(self) -> Matrix<R> {
        self.map(|a| -a.clone())
    }
}

impl<R: Ring> Mul for &Matrix<R> {
    type Output = Matrix<R>;
    fn mul(self, rhs: Self) -> Matrix<R> {
        assert_eq!(self.n, rhs.n, "matrix dimensions differ");
        let n = self.n;
        Matrix::from_fn(n, |i, j| {
            (0..n).fold(R::zero(), |acc, k| acc + self.get(i, k).clone() * rhs.get(k, j).clone())
        })
    }
}

impl<R: fmt::Debug> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[R]> = self.data.chunks(self.n.max(1)).take(self.n).collect();
        f.debug_list().entries(rows).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, GaussRational};
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
    fn determinant_and_inverse() {
        let a = q(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(a.determinant(), rational(18, 1));
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, Matrix::identity(3));
        assert_eq!(q(&[&[1, 2], &[2, 4]]).determinant(), rational(0, 1));
        assert!(q(&[&[1, 2], &[2, 4]]).inverse().is_err());
        assert_eq!(q(&[&[0, 1], &[1, 0]]).determinant(), rational(-1, 1));
    }

    #[test]
    fn float_determinant_pivots() {
        let a = Matrix::from_rows(vec![vec![1e-20, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!((a.determinant() + 1.0).abs() < 1e-12);
        let x = a.solve(&[1.0, 2.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hermitian_deviation_detects_asymmetry() {
        let i = GaussRational::new(rational(0, 1), rational(1, 1));
        let one = GaussRational::from_i64(1);
        let h = Matrix::from_rows(vec![vec![one.clone(), i.clone()], vec![-i.clone(), one.clone()]]).unwrap();
        assert_eq!(h.hermitian_deviation(), 0.0);
        let nh = Matrix::from_rows(vec![vec![one.clone(), i.clone()], vec![i, one]]).unwrap();
        assert_eq!(nh.hermitian_deviation(), 2.0);
    }

    #[test]
    fn structural_helpers() {
        let a = q(&[&[1, 2], &[3, 4]]);
        let b = q(&[&[5]]);
        let s = a.direct_sum(&b);
        assert_eq!(s.n(), 3);
        assert_eq!(s[(2, 2)], rational(5, 1));
        assert_eq!(s[(0, 2)], rational(0, 1));
        assert_eq!(a.trace(), rational(5, 1));
        assert_eq!(a.permute(&[1, 0]), q(&[&[4, 3], &[2, 1]]));
        assert!(!a.is_diagonal());
        assert!(Matrix::<BigRational>::identity(3).is_diagonal());
        assert!(Matrix::new(2, vec![rational(1, 1)]).is_err());
    }
}
