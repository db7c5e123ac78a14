use crate::classify::ClassifyError;
use crate::scalar::Scalar;
use crate::Matrix;

/// Outcome of Sylvester's criterion on a symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SylvesterReport<T> {
    pub positive_definite: bool,
    /// 1-based order of the first leading principal minor that is not
    /// positive, with its value.
    pub first_failure: Option<(usize, T)>,
}

/// Positive definiteness by Sylvester's criterion.
///
/// Eliminates without row exchanges; the k-th leading principal minor is
/// the product of the first k pivots, so the first non-positive pivot
/// marks the first non-positive minor.
pub fn sylvester_pd<T: Scalar>(m: &Matrix<T>) -> Result<SylvesterReport<T>, ClassifyError> {
    if !m.is_symmetric() {
        return Err(ClassifyError::NotSymmetric);
    }
    let (pivots, fail) = m.positive_pivots();
    Ok(match fail {
        None => SylvesterReport { positive_definite: true, first_failure: None },
        Some(k) => {
            let minor = pivots.iter().fold(T::one(), |acc, p| acc * p);
            SylvesterReport { positive_definite: false, first_failure: Some((k + 1, minor)) }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::CoxeterDiagram;
    use crate::Qf;

    #[test]
    fn one_by_one() {
        let m = Matrix::from_rows(vec![vec![Qf::from_i64(2)]]).unwrap();
        assert!(sylvester_pd(&m).unwrap().positive_definite);
    }

    #[test]
    fn degree_four_star() {
        let star = CoxeterDiagram::new(5, [(0, 1, 1), (0, 2, 1), (0, 3, 1), (0, 4, 1)]).unwrap();
        let b = star.to_sym().into_matrix();
        assert_eq!(b.determinant(), Qf::from_i64(0));
        let report = sylvester_pd(&b).unwrap();
        assert!(!report.positive_definite);
        assert_eq!(report.first_failure, Some((5, Qf::from_i64(0))));
    }

    #[test]
    fn e8() {
        let e8 = CoxeterDiagram::new(
            8,
            [(0, 1, 1), (1, 3, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1), (5, 6, 1), (6, 7, 1)],
        )
        .unwrap();
        let b = e8.to_sym().into_matrix();
        assert!(sylvester_pd(&b).unwrap().positive_definite);
        assert_eq!(b.determinant(), Qf::from_i64(1));
    }

    #[test]
    fn rejects_asymmetric() {
        let m = Matrix::from_rows(vec![vec![2.0, -1.0], vec![0.0, 2.0]]).unwrap();
        assert_eq!(sylvester_pd(&m), Err(ClassifyError::NotSymmetric));
    }
}
