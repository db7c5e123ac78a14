//! Cartan matrices: validation, connected components, symmetrisation and
//! isomorphism.
//!
//! Indices are 0-based throughout the API. Reports meant for people (error
//! messages, JSON) use 1-based vertex numbers.

use std::collections::VecDeque;
use std::fmt;

use num_rational::Ratio;
use num_traits::{CheckedMul, One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::rational_vec_str;
use crate::{Qf, QfMatrix, Rational};

/// Which of the defining properties an entry breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axiom {
    /// Diagonal entries equal 2.
    Diagonal,
    /// Off-diagonal entries are non-positive.
    OffDiagonalSign,
    /// `A_ij A_ji ∈ {0,1,2,3}` and `A_ij = 0 ⇔ A_ji = 0`.
    Product,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Diagonal => "(ii) diagonal entries equal 2",
            Axiom::OffDiagonalSign => "(iii) off-diagonal entries are non-positive",
            Axiom::Product => "(iv) A_ij A_ji in 0..=3 with paired zeros",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub i: usize,
    pub j: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartanError {
    #[error("matrix is empty")]
    Empty,
    #[error("matrix is not square (row {row} has {len} entries, expected {rank})")]
    NotSquare { row: usize, len: usize, rank: usize },
    #[error("Cartan axioms violated: {}", format_violations(.0))]
    Axioms(Vec<AxiomViolation>),
    #[error("not symmetrisable: inconsistent ratios around cycle {}", format_cycle(.cycle))]
    NotSymmetrisable { cycle: Vec<usize> },
    #[error("malformed matrix JSON: {0}")]
    Json(String),
}

fn format_violations(v: &[AxiomViolation]) -> String {
    v.iter()
        .map(|x| format!("{} at ({}, {}): {}", x.axiom, x.i + 1, x.j + 1, x.detail))
        .collect::<Vec<_>>()
        .join("; ")
}

fn format_cycle(c: &[usize]) -> String {
    c.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join("-")
}

/// An integer matrix satisfying the Cartan axioms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CartanMatrix {
    entries: Vec<Vec<i64>>,
}

/// JSON shape `{"rank": l, "entries": [[...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rank: usize,
    pub entries: Vec<Vec<i64>>,
}

impl CartanMatrix {
    /// Checks every axiom and reports all violations, not just the first.
    pub fn validate(raw: Vec<Vec<i64>>) -> Result<Self, CartanError> {
        let rank = raw.len();
        if rank == 0 {
            return Err(CartanError::Empty);
        }
        if let Some((row, r)) = raw.iter().enumerate().find(|(_, r)| r.len() != rank) {
            return Err(CartanError::NotSquare { row, len: r.len(), rank });
        }
        let mut violations = Vec::new();
        for i in 0..rank {
            if raw[i][i] != 2 {
                violations.push(AxiomViolation {
                    axiom: Axiom::Diagonal,
                    i,
                    j: i,
                    detail: format!("entry is {}", raw[i][i]),
                });
            }
            for j in 0..rank {
                if i == j {
                    continue;
                }
                let (a, b) = (raw[i][j], raw[j][i]);
                if a > 0 {
                    violations.push(AxiomViolation {
                        axiom: Axiom::OffDiagonalSign,
                        i,
                        j,
                        detail: format!("entry is {a}"),
                    });
                }
                if j < i {
                    continue;
                }
                if (a == 0) != (b == 0) {
                    let (zi, zj) = if a == 0 { (i, j) } else { (j, i) };
                    violations.push(AxiomViolation {
                        axiom: Axiom::Product,
                        i: zi,
                        j: zj,
                        detail: format!(
                            "A_{}{} = 0 but A_{}{} = {}",
                            zi + 1,
                            zj + 1,
                            zj + 1,
                            zi + 1,
                            raw[zj][zi]
                        ),
                    });
                } else {
                    let p = a.checked_mul(b);
                    if !matches!(p, Some(0..=3)) {
                        violations.push(AxiomViolation {
                            axiom: Axiom::Product,
                            i,
                            j,
                            detail: match p {
                                Some(p) => format!("product {p} not in 0..=3"),
                                None => "product overflows".into(),
                            },
                        });
                    }
                }
            }
        }
        if violations.is_empty() {
            Ok(CartanMatrix { entries: raw })
        } else {
            Err(CartanError::Axioms(violations))
        }
    }

    pub fn from_json(s: &str) -> Result<Self, CartanError> {
        let m: MatrixJson = serde_json::from_str(s).map_err(|e| CartanError::Json(e.to_string()))?;
        if m.rank != m.entries.len() {
            return Err(CartanError::Json(format!(
                "rank {} does not match {} rows",
                m.rank,
                m.entries.len()
            )));
        }
        Self::validate(m.entries)
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson { rank: self.rank(), entries: self.entries.clone() }
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    /// Number of lines between `i` and `j` in the Dynkin diagram.
    pub fn multiplicity(&self, i: usize, j: usize) -> u8 {
        if i == j {
            0
        } else {
            (self.entries[i][j] * self.entries[j][i]) as u8
        }
    }

    pub fn neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.rank()).filter(move |&j| j != i && self.entries[i][j] != 0)
    }

    /// `S A Sᵀ` with new index `i` taken from old index `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let l = self.rank();
        assert_eq!(perm.len(), l);
        CartanMatrix {
            entries: (0..l).map(|i| (0..l).map(|j| self.entries[perm[i]][perm[j]]).collect()).collect(),
        }
    }

    /// Number of Dynkin diagram edges, not counting multiplicity.
    pub fn edge_count(&self) -> usize {
        let l = self.rank();
        (0..l).map(|i| ((i + 1)..l).filter(|&j| self.entries[i][j] != 0).count()).sum()
    }

    pub fn components(&self) -> ComponentPartition {
        let l = self.rank();
        let mut seen = vec![false; l];
        let mut blocks = Vec::new();
        for start in 0..l {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut block = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                for j in self.neighbours(i) {
                    if !seen[j] {
                        seen[j] = true;
                        block.push(j);
                        queue.push_back(j);
                    }
                }
            }
            block.sort_unstable();
            blocks.push(block);
        }
        ComponentPartition { blocks }
    }

    /// Diagram has no cycles.
    pub fn is_forest(&self) -> bool {
        self.edge_count() + self.components().blocks.len() == self.rank()
    }

    /// Builds the symmetrised Cartan matrix.
    ///
    /// Each component is walked breadth-first from its lowest index with
    /// `c² = 1` there and `c²_j = c²_i · A_ij / A_ji` across each tree
    /// edge. Every non-tree edge must then satisfy `c²_i A_ij = c²_j A_ji`;
    /// the first that does not yields the witness cycle.
    pub fn symmetrise(&self) -> Result<SymCartanMatrix, CartanError> {
        let l = self.rank();
        // Word-sized ratios cover every realistic input; big ones take over on overflow.
        let small = self.propagate(Ratio::<i64>::one(), |w, p, q| {
            w.checked_mul(&Ratio::new(p, q))
        });
        let weights: Vec<Rational> = match small {
            Some(r) => r?
                .into_iter()
                .map(|w| Rational::new((*w.numer()).into(), (*w.denom()).into()))
                .collect(),
            None => self
                .propagate(Rational::one(), |w, p, q| Some(w * Rational::new(p.into(), q.into())))
                .expect("big rationals do not overflow")?,
        };
        let radicals: Vec<Qf> = (0..=3i64)
            .map(|m| -Qf::surd(&Rational::from_integer(m.into())).expect("m in 0..=3"))
            .collect();
        let b = QfMatrix::from_fn(l, |i, j| {
            if i == j {
                Qf::from_i64(2)
            } else {
                radicals[(self.entries[i][j] * self.entries[j][i]) as usize].clone()
            }
        });
        Ok(SymCartanMatrix { b, weights })
    }

    // Breadth-first weights; `None` when `step` overflows.
    fn propagate<T: Clone + PartialEq>(
        &self,
        one: T,
        step: impl Fn(&T, i64, i64) -> Option<T>,
    ) -> Option<Result<Vec<T>, CartanError>> {
        let l = self.rank();
        let mut weight: Vec<Option<T>> = vec![None; l];
        let mut parent: Vec<Option<usize>> = vec![None; l];
        for block in self.components().blocks {
            let root = block[0];
            weight[root] = Some(one.clone());
            let mut queue = VecDeque::from([root]);
            while let Some(i) = queue.pop_front() {
                let wi = weight[i].clone().unwrap();
                for j in self.neighbours(i) {
                    let next = step(&wi, self.entries[i][j], self.entries[j][i])?;
                    match &weight[j] {
                        None => {
                            weight[j] = Some(next);
                            parent[j] = Some(i);
                            queue.push_back(j);
                        }
                        Some(wj) if *wj != next => {
                            return Some(Err(CartanError::NotSymmetrisable { cycle: witness_cycle(&parent, i, j) }));
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        Some(Ok(weight.into_iter().map(Option::unwrap).collect()))
    }

    /// A permutation `p` with `other[p[i]][p[j]] == self[i][j]`, if any.
    pub fn is_isomorphic(&self, other: &CartanMatrix) -> Option<Vec<usize>> {
        find_isomorphism(&self.entries, &other.entries)
    }
}

/// A permutation `p` with `b[p[i]][p[j]] == a[i][j]` for all `i, j`.
///
/// Backtracking over row assignments; candidates are pruned by the sorted
/// contents of each row paired with its column, and by consistency with
/// the rows already placed.
pub(crate) fn find_isomorphism<T: Ord + Clone>(a: &[Vec<T>], b: &[Vec<T>]) -> Option<Vec<usize>> {
    let l = a.len();
    if l != b.len() {
        return None;
    }
    let signature = |m: &[Vec<T>], i: usize| {
        let mut out: Vec<(T, T)> =
            (0..l).filter(|&j| j != i).map(|j| (m[i][j].clone(), m[j][i].clone())).collect();
        out.sort_unstable();
        (m[i][i].clone(), out)
    };
    let ours: Vec<_> = (0..l).map(|i| signature(a, i)).collect();
    let theirs: Vec<_> = (0..l).map(|i| signature(b, i)).collect();
    let mut sorted_ours = ours.clone();
    let mut sorted_theirs = theirs.clone();
    sorted_ours.sort();
    sorted_theirs.sort();
    if sorted_ours != sorted_theirs {
        return None;
    }
    let candidates: Vec<Vec<usize>> =
        (0..l).map(|i| (0..l).filter(|&k| theirs[k] == ours[i]).collect()).collect();
    let mut perm = Vec::with_capacity(l);
    let mut used = vec![false; l];
    extend_iso(a, b, &candidates, &mut perm, &mut used).then_some(perm)
}

fn extend_iso<T: Ord>(
    a: &[Vec<T>],
    b: &[Vec<T>],
    candidates: &[Vec<usize>],
    perm: &mut Vec<usize>,
    used: &mut [bool],
) -> bool {
    let i = perm.len();
    if i == a.len() {
        return true;
    }
    for &k in &candidates[i] {
        if used[k] {
            continue;
        }
        let consistent = perm
            .iter()
            .enumerate()
            .all(|(j, &pj)| b[k][pj] == a[i][j] && b[pj][k] == a[j][i]);
        if !consistent {
            continue;
        }
        used[k] = true;
        perm.push(k);
        if extend_iso(a, b, candidates, perm, used) {
            return true;
        }
        perm.pop();
        used[k] = false;
    }
    false
}

fn witness_cycle(parent: &[Option<usize>], i: usize, j: usize) -> Vec<usize> {
    let path_to_root = |mut v: usize| {
        let mut path = vec![v];
        while let Some(p) = parent[v] {
            path.push(p);
            v = p;
        }
        path
    };
    let pi = path_to_root(i);
    let pj = path_to_root(j);
    // Lowest common ancestor: first vertex on i's path that lies on j's.
    let (ci, lca) = pi.iter().enumerate().find(|(_, v)| pj.contains(v)).map(|(k, &v)| (k, v)).unwrap();
    let cj = pj.iter().position(|&v| v == lca).unwrap();
    let mut cycle: Vec<usize> = pi[..=ci].to_vec();
    cycle.extend(pj[..cj].iter().rev());
    cycle
}

/// Partition of the indices into connected blocks, each sorted, blocks
/// ordered by their lowest index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentPartition {
    pub blocks: Vec<Vec<usize>>,
}

/// Symmetric matrix `B` with `B_ii = 2`, `B_ij = -√(A_ij A_ji)`, together
/// with the squared scale factors `c²` for which `B_ij = c_i A_ij / c_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymCartanMatrix {
    b: QfMatrix,
    #[serde(with = "rational_vec_str")]
    weights: Vec<Rational>,
}

/// JSON shape of a [`SymCartanMatrix`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymJson {
    pub rank: usize,
    pub entries: Vec<Vec<Qf>>,
    #[serde(with = "rational_vec_str")]
    pub weights: Vec<Rational>,
}

impl SymCartanMatrix {
    /// Wraps a symmetric matrix with unit weights, as produced from a
    /// Coxeter diagram where no Cartan matrix has been chosen yet.
    pub fn from_symmetric(b: QfMatrix) -> Self {
        let weights = vec![Rational::one(); b.dim()];
        SymCartanMatrix { b, weights }
    }

    pub fn rank(&self) -> usize {
        self.b.dim()
    }

    pub fn matrix(&self) -> &QfMatrix {
        &self.b
    }

    pub fn into_matrix(self) -> QfMatrix {
        self.b
    }

    /// Squared scale factors `c²_i`.
    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// `c_i = √(c²_i)`. The weights are products of the ratios 2^±1,
    /// 3^±1, so the root always lies in ℚ(√2, √3).
    pub fn scale(&self, i: usize) -> Qf {
        Qf::surd(&self.weights[i]).expect("weight is a product of 2s and 3s")
    }

    /// Multiplicity `B_ij²` of the line between `i` and `j`.
    pub fn multiplicity(&self, i: usize, j: usize) -> Rational {
        let x = &self.b[(i, j)];
        (x * x).to_rational().expect("B_ij² is rational")
    }

    /// Checks `B_ij = c_i A_ij c_j⁻¹` entrywise, exactly.
    pub fn satisfies_scaling(&self, a: &CartanMatrix) -> bool {
        let l = self.rank();
        if a.rank() != l {
            return false;
        }
        // Weights repeat, so each distinct root is taken once.
        let mut roots: Vec<(&Rational, Qf)> = Vec::new();
        let scales: Vec<Qf> = self
            .weights
            .iter()
            .map(|w| match roots.iter().find(|(v, _)| *v == w) {
                Some((_, c)) => c.clone(),
                None => {
                    let c = Qf::surd(w).expect("weight is a product of 2s and 3s");
                    roots.push((w, c.clone()));
                    c
                }
            })
            .collect();
        // c_j ≠ 0, so B_ij = c_i A_ij / c_j iff B_ij c_j = c_i A_ij.
        (0..l).all(|i| {
            (0..l).all(|j| match a.entry(i, j) {
                0 => self.b[(i, j)].is_zero(),
                e => &self.b[(i, j)] * &scales[j] == &scales[i] * &Qf::from_i64(e),
            })
        })
    }

    pub fn to_json(&self) -> SymJson {
        SymJson { rank: self.rank(), entries: self.b.rows(), weights: self.weights.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(rows: &[&[i64]]) -> CartanMatrix {
        CartanMatrix::validate(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn g2_is_valid() {
        let g2 = cm(&[&[2, -1], &[-3, 2]]);
        assert_eq!(g2.multiplicity(0, 1), 3);
    }

    #[test]
    fn product_too_large() {
        let err = CartanMatrix::validate(vec![vec![2, -1], vec![-4, 2]]).unwrap_err();
        let CartanError::Axioms(v) = err else { panic!("{err:?}") };
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].axiom, Axiom::Product);
        assert_eq!((v[0].i, v[0].j), (0, 1));
    }

    #[test]
    fn unpaired_zero() {
        let err = CartanMatrix::validate(vec![vec![2, 0], vec![-1, 2]]).unwrap_err();
        let CartanError::Axioms(v) = err else { panic!("{err:?}") };
        assert_eq!(v[0].axiom, Axiom::Product);
        assert_eq!((v[0].i, v[0].j), (0, 1));
    }

    #[test]
    fn diagonal_and_sign() {
        let err = CartanMatrix::validate(vec![vec![1, 1], vec![1, 2]]).unwrap_err();
        let CartanError::Axioms(v) = err else { panic!() };
        let axioms: Vec<_> = v.iter().map(|x| x.axiom).collect();
        assert!(axioms.contains(&Axiom::Diagonal));
        assert!(axioms.contains(&Axiom::OffDiagonalSign));
    }

    #[test]
    fn shape_errors() {
        assert_eq!(CartanMatrix::validate(vec![]), Err(CartanError::Empty));
        assert!(matches!(
            CartanMatrix::validate(vec![vec![2, 0], vec![0]]),
            Err(CartanError::NotSquare { row: 1, .. })
        ));
        assert!(matches!(
            CartanMatrix::from_json(r#"{"rank": 3, "entries": [[2]]}"#),
            Err(CartanError::Json(_))
        ));
    }

    #[test]
    fn components_examples() {
        assert_eq!(cm(&[&[2, 0], &[0, 2]]).components().blocks, vec![vec![0], vec![1]]);
        assert_eq!(cm(&[&[2]]).components().blocks, vec![vec![0]]);
        let f4 = cm(&[&[2, -1, 0, 0], &[-1, 2, -2, 0], &[0, -1, 2, -1], &[0, 0, -1, 2]]);
        assert_eq!(f4.components().blocks, vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn symmetrise_b2() {
        let b2 = cm(&[&[2, -1], &[-2, 2]]);
        let s = b2.symmetrise().unwrap();
        let r2 = -Qf::sqrt_basis(2).unwrap();
        assert_eq!(s.matrix()[(0, 1)], r2);
        assert_eq!(s.matrix()[(1, 0)], r2);
        assert_eq!(s.weights(), &[q(1, 1), q(1, 2)]);
        assert!(s.satisfies_scaling(&b2));
    }

    #[test]
    fn symmetrise_symmetric_is_identity() {
        let a3 = cm(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        let s = a3.symmetrise().unwrap();
        assert_eq!(*s.matrix(), crate::Matrix::from_fn(3, |i, j| Qf::from_i64(a3.entry(i, j))));
        assert!(s.weights().iter().all(|w| w.is_one()));
    }

    #[test]
    fn inconsistent_cycle() {
        let a = cm(&[&[2, -1, -1], &[-2, 2, -1], &[-1, -1, 2]]);
        let err = a.symmetrise().unwrap_err();
        let CartanError::NotSymmetrisable { cycle } = err else { panic!() };
        let mut sorted = cycle.clone();
        sorted.sort();
        assert_eq!(sorted, vec![0, 1, 2]);
    }

    #[test]
    fn isomorphism_examples() {
        let b2 = cm(&[&[2, -1], &[-2, 2]]);
        let b2t = cm(&[&[2, -2], &[-1, 2]]);
        let a2 = cm(&[&[2, -1], &[-1, 2]]);
        assert_eq!(b2.is_isomorphic(&b2), Some(vec![0, 1]));
        assert_eq!(b2.is_isomorphic(&b2t), Some(vec![1, 0]));
        assert_eq!(a2.is_isomorphic(&b2), None);
    }

    #[test]
    fn json_roundtrip() {
        let a = CartanMatrix::from_json(r#"{"rank": 2, "entries": [[2,-1],[-3,2]]}"#).unwrap();
        assert_eq!(a.entry(1, 0), -3);
        let s = serde_json::to_string(&a.symmetrise().unwrap().to_json()).unwrap();
        assert_eq!(
            s,
            r#"{"rank":2,"entries":[[["2","0","0","0"],["0","0","-1","0"]],[["0","0","-1","0"],["2","0","0","0"]]],"weights":["1","1/3"]}"#
        );
    }
}
