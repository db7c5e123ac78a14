//! Orthogonal reduction of the three node shapes to chains.
//!
//! For `B = [[X, Y], [Yᵀ, Z]]` whose top-left block `X` is the node block,
//! `T = S ⊕ I` with `S` orthogonal gives `B' = T B Tᵀ = [[X', Y], [Yᵀ, Z]]`.
//! `S` fixes the node row, so `Y` is unchanged, and `X'` is tridiagonal.
//! `B'` is positive definite exactly when `B` is.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::classify::ClassifyError;
use crate::{Qf, QfMatrix, Rational, SymCartanMatrix};

/// Which node block heads the matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum NodeCase {
    /// `(*,*)>*-…`, block order: leaf, leaf, node.
    Y,
    /// `(*-*,*)>*-…`, block order: outer, inner, leaf, node.
    E,
    /// `(*-*,*-*)>*-…`, block order: outer₁, outer₂, inner₁, inner₂, node.
    H,
}

impl fmt::Display for NodeCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NodeCase::Y => "(*,*)>*",
            NodeCase::E => "(*-*,*)>*",
            NodeCase::H => "(*-*,*-*)>*",
        })
    }
}

impl NodeCase {
    pub fn block_size(self) -> usize {
        match self {
            NodeCase::Y => 3,
            NodeCase::E => 4,
            NodeCase::H => 5,
        }
    }

    /// Edges of the node block in block order.
    fn block_edges(self) -> &'static [(usize, usize)] {
        match self {
            NodeCase::Y => &[(0, 2), (1, 2)],
            NodeCase::E => &[(0, 1), (1, 3), (2, 3)],
            NodeCase::H => &[(0, 2), (1, 3), (2, 4), (3, 4)],
        }
    }

    fn block(self) -> QfMatrix {
        let n = self.block_size();
        let mut x = QfMatrix::from_fn(n, |i, j| if i == j { Qf::from_i64(2) } else { Qf::zero() });
        for &(i, j) in self.block_edges() {
            x[(i, j)] = Qf::from_i64(-1);
            x[(j, i)] = Qf::from_i64(-1);
        }
        x
    }

    /// The orthogonal block `S`; `h` below is √½.
    fn rotation(self) -> QfMatrix {
        let h = Qf::surd(&Rational::new(1.into(), 2.into())).unwrap();
        let o = Qf::zero;
        let one = Qf::one;
        let rows = match self {
            NodeCase::Y => vec![
                vec![h.clone(), -h.clone(), o()],
                vec![h.clone(), h.clone(), o()],
                vec![o(), o(), one()],
            ],
            NodeCase::E => vec![
                vec![o(), h.clone(), -h.clone(), o()],
                vec![one(), o(), o(), o()],
                vec![o(), h.clone(), h.clone(), o()],
                vec![o(), o(), o(), one()],
            ],
            NodeCase::H => vec![
                vec![o(), o(), h.clone(), -h.clone(), o()],
                vec![h.clone(), -h.clone(), o(), o(), o()],
                vec![h.clone(), h.clone(), o(), o(), o()],
                vec![o(), o(), h.clone(), h.clone(), o()],
                vec![o(), o(), o(), o(), one()],
            ],
        };
        QfMatrix::from_rows(rows).unwrap()
    }
}

/// Applies the node reduction for `case` to `b`.
///
/// The leading block must equal the node block of `case` exactly, and the
/// only link from the block to the rest must be a single line from the
/// node (last block row) to the first vertex after the block.
pub fn node_reduce(b: &SymCartanMatrix, case: NodeCase) -> Result<QfMatrix, ClassifyError> {
    let b = b.matrix();
    let k = case.block_size();
    let l = b.dim();
    if l < k {
        return Err(ClassifyError::PatternMismatch(format!("{case} needs at least {k} vertices, got {l}")));
    }
    let head: Vec<usize> = (0..k).collect();
    let block = b.principal(&head);
    if block != case.block() {
        let same_shape = GenCoxeterDiagram::from_matrix(&block)
            .map(|g| g.shape_isomorphic(&GenCoxeterDiagram::from_matrix(&case.block()).unwrap()))
            .unwrap_or(false);
        return Err(if same_shape {
            ClassifyError::WrongVertexOrder(case)
        } else {
            ClassifyError::PatternMismatch(format!("leading {k}x{k} block is not the {case} block"))
        });
    }
    for i in 0..k {
        for j in k..l {
            let expected = if i == k - 1 && j == k { Qf::from_i64(-1) } else { Qf::zero() };
            if b[(i, j)] != expected {
                return Err(ClassifyError::PatternMismatch(format!(
                    "block vertex {} is linked to vertex {} outside the node pattern",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let s = case.rotation();
    let t = QfMatrix::from_fn(l, |i, j| {
        if i < k && j < k {
            s[(i, j)].clone()
        } else if i == j {
            Qf::one()
        } else {
            Qf::zero()
        }
    });
    Ok(t.mul(b).mul(&t.transpose()))
}

/// Diagram of a symmetric matrix with diagonal 2 whose line
/// "multiplicities" `B_ij²` are arbitrary positive rationals, such as the
/// ½ lines produced by [`node_reduce`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenCoxeterDiagram {
    order: usize,
    edges: Vec<(usize, usize, Rational)>,
}

impl GenCoxeterDiagram {
    /// Reads `B_ij²` off a symmetric matrix with diagonal 2 and
    /// non-positive off-diagonal entries.
    pub fn from_matrix(b: &QfMatrix) -> Result<Self, ClassifyError> {
        if !b.is_symmetric() {
            return Err(ClassifyError::NotSymmetric);
        }
        let l = b.dim();
        let mut edges = Vec::new();
        for i in 0..l {
            if b[(i, i)] != Qf::from_i64(2) {
                return Err(ClassifyError::PatternMismatch(format!("diagonal entry {} is not 2", i + 1)));
            }
            for j in (i + 1)..l {
                let x = &b[(i, j)];
                if x.is_zero() {
                    continue;
                }
                if x.sign() != crate::Sign::Negative {
                    return Err(ClassifyError::PatternMismatch(format!("entry ({}, {}) is positive", i + 1, j + 1)));
                }
                let m = (x * x)
                    .to_rational()
                    .ok_or_else(|| ClassifyError::PatternMismatch(format!("entry ({}, {}) squared is irrational", i + 1, j + 1)))?;
                edges.push((i, j, m));
            }
        }
        Ok(GenCoxeterDiagram { order: l, edges })
    }

    pub fn from_coxeter(d: &crate::CoxeterDiagram) -> Self {
        GenCoxeterDiagram {
            order: d.order(),
            edges: d.edges().iter().map(|e| (e.u, e.v, Rational::from_integer(e.m.into()))).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn edges(&self) -> &[(usize, usize, Rational)] {
        &self.edges
    }

    pub fn multiplicity(&self, i: usize, j: usize) -> Rational {
        let (u, v) = (i.min(j), i.max(j));
        self.edges
            .iter()
            .find(|e| e.0 == u && e.1 == v)
            .map_or_else(Rational::zero, |e| e.2.clone())
    }

    /// When every line joins consecutive indices, the squared subdiagonal
    /// `t[k] = m(k, k+1)` (zero where the chain breaks).
    pub fn subdiagonal(&self) -> Option<Vec<Rational>> {
        if self.edges.iter().any(|e| e.1 != e.0 + 1) {
            return None;
        }
        Some((1..self.order).map(|i| self.multiplicity(i - 1, i)).collect())
    }

    /// Chain text in index order, `~` for ½ lines and a space where the
    /// chain breaks; `None` if not every line joins consecutive indices or
    /// a multiplicity has no symbol.
    pub fn chain_text(&self) -> Option<String> {
        let t = self.subdiagonal()?;
        let mut out = String::from("*");
        for m in t {
            let sym = if m.is_zero() {
                " "
            } else if m == Rational::new(1.into(), 2.into()) {
                "~"
            } else if m.is_integer() && m.is_positive() && m <= Rational::from_integer(3.into()) {
                ["-", "=", "#"][m.to_integer().to_string().parse::<usize>().unwrap() - 1]
            } else {
                return None;
            };
            out.push_str(sym);
            out.push('*');
        }
        Some(out)
    }

    fn shape_isomorphic(&self, other: &GenCoxeterDiagram) -> bool {
        let mat = |g: &GenCoxeterDiagram| {
            let mut m = vec![vec![Rational::zero(); g.order]; g.order];
            for (u, v, w) in &g.edges {
                m[*u][*v] = w.clone();
                m[*v][*u] = w.clone();
            }
            m
        };
        crate::cartan::find_isomorphism(&mat(self), &mat(other)).is_some()
    }
}
