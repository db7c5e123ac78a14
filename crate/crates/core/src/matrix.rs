//! Dense square matrices over any [`Scalar`].

use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::scalar::{Scalar, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix<T> {
    dim: usize,
    // Row-major.
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Matrix { dim, data: vec![T::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Matrix { dim, data }
    }

    /// Builds from rows; `None` unless the rows form a square.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Option<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return None;
        }
        Some(Matrix { dim, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.dim.max(1)).take(self.dim).map(<[T]>::to_vec).collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { dim: self.dim, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Self::from_fn(self.dim, |i, j| {
            (0..self.dim).fold(T::zero(), |acc, k| acc + self[(i, k)].clone() * &rhs[(k, j)])
        })
    }

    /// `P M Pᵀ` for the permutation taking old index `perm[i]` to new index `i`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.dim);
        Self::from_fn(self.dim, |i, j| self[(perm[i], perm[j])].clone())
    }

    /// Principal submatrix on the given indices, in the given order.
    pub fn principal(&self, indices: &[usize]) -> Self {
        Self::from_fn(indices.len(), |i, j| self[(indices[i], indices[j])].clone())
    }

    /// `v M wᵀ`.
    pub fn bilinear(&self, v: &[T], w: &[T]) -> T {
        let mut acc = T::zero();
        for i in 0..self.dim {
            if v[i].is_zero() {
                continue;
            }
            let row = (0..self.dim).fold(T::zero(), |a, j| a + self[(i, j)].clone() * &w[j]);
            acc = acc + v[i].clone() * &row;
        }
        acc
    }

    /// Determinant by Gaussian elimination with a nonzero pivot search.
    /// Exact for the exact scalar types.
    pub fn determinant(&self) -> T {
        let n = self.dim;
        let mut a = self.rows();
        let mut det = T::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
                return T::zero();
            };
            if p != k {
                a.swap(p, k);
                det = -det;
            }
            let inv = a[k][k].inverse().expect("nonzero pivot");
            det = det * &a[k][k];
            eliminate_below(&mut a, k, &inv);
        }
        det
    }

    /// Leading principal minors of orders 1..=n, each by its own determinant.
    pub fn leading_minors(&self) -> Vec<T> {
        (1..=self.dim)
            .map(|k| self.principal(&(0..k).collect::<Vec<_>>()).determinant())
            .collect()
    }

    /// Pivots of elimination without row exchanges, stopping at the first
    /// pivot that is not positive. The k-th leading principal minor is the
    /// product of the first k pivots, so all minors are positive exactly
    /// when every pivot is.
    pub fn positive_pivots(&self) -> (Vec<T>, Option<usize>) {
        let n = self.dim;
        let mut a = self.rows();
        let mut pivots = Vec::with_capacity(n);
        for k in 0..n {
            let pivot = a[k][k].clone();
            let sign = pivot.sign();
            pivots.push(pivot);
            if sign != Sign::Positive {
                return (pivots, Some(k));
            }
            let inv = a[k][k].inverse().expect("positive pivot");
            eliminate_below(&mut a, k, &inv);
        }
        (pivots, None)
    }
}

fn eliminate_below<T: Scalar>(a: &mut [Vec<T>], k: usize, pivot_inv: &T) {
    let n = a.len();
    let (top, bottom) = a.split_at_mut(k + 1);
    let pivot_row = &top[k];
    for row in bottom.iter_mut() {
        if row[k].is_zero() {
            continue;
        }
        let factor = row[k].clone() * pivot_inv;
        for j in (k + 1)..n {
            if pivot_row[j].is_zero() {
                continue;
            }
            row[j] = row[j].clone() - &(factor.clone() * &pivot_row[j]);
        }
        row[k] = T::zero();
    }
}

impl<T> Matrix<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.dim && j < self.dim, "index ({i}, {j}) out of range");
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.dim && j < self.dim, "index ({i}, {j}) out of range");
        &mut self.data[i * self.dim + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Qf, Rational};

    fn int_matrix(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn determinant_needs_row_swap() {
        let m = int_matrix(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        assert_eq!(m.determinant(), Rational::from_integer((-2).into()));
    }

    #[test]
    fn floats_agree_with_rationals() {
        let m = int_matrix(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        let f = m.map(|x| x.numer().to_string().parse::<f64>().unwrap());
        assert!((f.determinant() - 4.0).abs() < 1e-12);
        assert_eq!(m.determinant(), Rational::from_integer(4.into()));
    }

    #[test]
    fn pivots_report_first_failure() {
        let m = int_matrix(&[&[2, -1, 0], &[-1, 2, -2], &[0, -2, 2]]);
        // minors 2, 3, 4·... = 2·(4-4) - (-1)(-2) = -2
        let (pivots, fail) = m.positive_pivots();
        assert_eq!(fail, Some(2));
        assert_eq!(pivots.len(), 3);
        assert_eq!(m.leading_minors()[2], Rational::from_integer((-2).into()));
    }

    #[test]
    fn qf_bilinear() {
        let s2 = -Qf::sqrt_basis(2).unwrap();
        let b = Matrix::from_rows(vec![vec![Qf::from_i64(2), s2.clone()], vec![s2, Qf::from_i64(2)]]).unwrap();
        let ones = vec![Qf::from_i64(1); 2];
        // 2(l - Σ√m) = 2(2 - √2)
        let expected = Qf::from_i64(4) - Qf::sqrt_basis(2).unwrap() * Qf::from_i64(2);
        assert_eq!(b.bilinear(&ones, &ones), expected);
        assert!(b.is_symmetric());
    }
}
