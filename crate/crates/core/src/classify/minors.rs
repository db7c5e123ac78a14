use serde::Serialize;

use crate::scalar::{Scalar, Sign};

/// Leading principal minors `p_0..=p_l` of a tridiagonal matrix with
/// diagonal 2, given the squared subdiagonal entries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinorSequence<T> {
    pub p: Vec<T>,
    /// Smallest `i ≥ 1` with `p_i ≤ 0`.
    pub first_nonpositive: Option<usize>,
}

impl<T: Scalar> MinorSequence<T> {
    pub fn is_positive(&self) -> bool {
        self.first_nonpositive.is_none()
    }

    /// `p_l`, the determinant of the whole matrix.
    pub fn last(&self) -> &T {
        self.p.last().expect("p_0 always present")
    }

    pub fn rank(&self) -> usize {
        self.p.len() - 1
    }
}

/// Runs `p_0 = 1`, `p_1 = 2`, `p_i = 2 p_{i-1} - t_i p_{i-2}`.
///
/// `t[k]` is the squared entry joining vertices `k` and `k + 1`, so a chain
/// of `l` vertices takes `l - 1` values. A zero `t` splits the chain; the
/// recurrence then multiplies the minors of the two pieces.
pub fn minor_sequence<T: Scalar>(t: &[T]) -> MinorSequence<T> {
    let two = T::from_int(2);
    let mut p = vec![T::one(), two.clone()];
    for ti in t {
        let n = p.len();
        let next = two.clone() * &p[n - 1] - ti.clone() * &p[n - 2];
        p.push(next);
    }
    let first_nonpositive = (1..p.len()).find(|&i| p[i].sign() != Sign::Positive);
    MinorSequence { p, first_nonpositive }
}
