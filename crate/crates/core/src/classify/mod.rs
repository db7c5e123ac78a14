//! Positive definiteness of connected Coxeter diagrams.
//!
//! [`classify_connected`] decides by structure first (line count, vertex
//! degree, number of double lines and nodes), then by the chain minor
//! recurrence, reducing node diagrams to chains with [`node_reduce`]
//! where needed. [`sylvester_pd`] is an independent check on any
//! symmetric matrix and is not used by the decision itself.

mod decide;
mod enumerate;
mod minors;
mod reduce;
mod sylvester;

use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::exactnum::format_rational;
use crate::{Qf, Rational};

pub use decide::{classify_connected, tree_pivots};
pub use enumerate::{canonical_code, enumerate_connected, enumerate_connected_bounded, DEFAULT_RANK_BOUND};
pub use minors::{minor_sequence, MinorSequence};
pub use reduce::{node_reduce, GenCoxeterDiagram, NodeCase};
pub use sylvester::{sylvester_pd, SylvesterReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("diagram is not connected")]
    Disconnected,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("diagram does not match the node pattern: {0}")]
    PatternMismatch(String),
    #[error("vertices are not in the block order of the {0} node")]
    WrongVertexOrder(NodeCase),
    #[error("rank {max_rank} exceeds the enumeration bound {bound}")]
    BoundExceeded { max_rank: usize, bound: usize },
}

/// Connected positive definite Coxeter diagram families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    A,
    /// `B_l` and `C_l` share a Coxeter diagram.
    BC,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::A => "A",
            Family::BC => "B/C",
            Family::D => "D",
            Family::E => "E",
            Family::F => "F",
            Family::G => "G",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    PositiveDefinite { family: Family, rank: usize },
    NotPositiveDefinite,
}

impl Verdict {
    pub fn is_positive_definite(&self) -> bool {
        matches!(self, Verdict::PositiveDefinite { .. })
    }

    /// `"A_3"`, `"B/C_4"`, `"E_8"`, … for positive definite verdicts.
    pub fn family_name(&self) -> Option<String> {
        match self {
            Verdict::PositiveDefinite { family, rank } => Some(format!("{family}_{rank}")),
            Verdict::NotPositiveDefinite => None,
        }
    }
}

/// Why a diagram is not positive definite. Vertex numbers are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// As many lines as vertices: the all-ones vector on the cycle gives
    /// `v B vᵀ = 2(k - Σ√m) ≤ 0`.
    TooManyLines { lines: usize, cycle: Vec<usize>, form_value: Qf },
    /// Degree above 3 counting multiplicity.
    VertexDegree { vertex: usize, degree: u32 },
    /// Chain between two double lines; its minors end in 0.
    TwoDoubleLines { path: Vec<usize> },
    DoubleLineAndNode { double_line: (usize, usize), node: usize },
    TwoNodes { nodes: Vec<usize> },
    /// A chain minor (possibly after a node reduction) that is not positive.
    Minor {
        index: usize,
        value: Rational,
        vertices: Vec<usize>,
        reduction: Option<NodeCase>,
        reduced: Option<String>,
    },
    /// A non-positive pivot of the leaf-first recurrence on a tree.
    TreeRecurrence { vertex: usize, pivot: Rational, vertices: Vec<usize> },
}

impl Witness {
    /// The structural fact the verdict rests on.
    pub fn rule(&self) -> &'static str {
        match self {
            Witness::TooManyLines { .. } => "fewer lines than vertices",
            Witness::VertexDegree { .. } => "vertex degree at most 3",
            Witness::TwoDoubleLines { .. } => "at most one double line",
            Witness::DoubleLineAndNode { .. } | Witness::TwoNodes { .. } => "at most one double line or node",
            Witness::Minor { reduction: None, .. } => "chain minors",
            Witness::Minor { reduction: Some(NodeCase::Y), .. } => "D-node reduction",
            Witness::Minor { reduction: Some(NodeCase::E), .. } => "E-node reduction",
            Witness::Minor { reduction: Some(NodeCase::H), .. } => "three branches of length at least 2",
            Witness::TreeRecurrence { .. } => "tree pivot recurrence",
        }
    }

    pub fn to_json(&self) -> Value {
        let one = |v: &[usize]| v.iter().map(|x| x + 1).collect::<Vec<_>>();
        let mut out = match self {
            Witness::TooManyLines { lines, cycle, form_value } => json!({
                "kind": "too_many_lines",
                "lines": lines,
                "cycle": one(cycle),
                "form_value": form_value,
            }),
            Witness::VertexDegree { vertex, degree } => json!({
                "kind": "vertex_degree",
                "vertex": vertex + 1,
                "degree": degree,
            }),
            Witness::TwoDoubleLines { path } => json!({"kind": "two_double_lines", "path": one(path)}),
            Witness::DoubleLineAndNode { double_line, node } => json!({
                "kind": "double_line_and_node",
                "double_line": [double_line.0 + 1, double_line.1 + 1],
                "node": node + 1,
            }),
            Witness::TwoNodes { nodes } => json!({"kind": "two_nodes", "nodes": one(nodes)}),
            Witness::Minor { index, value, vertices, reduction, reduced, .. } => json!({
                "kind": "minor",
                "index": index,
                "value": format_rational(value),
                "vertices": one(vertices),
                "reduction": reduction.map(|r| r.to_string()),
                "reduced": reduced,
            }),
            Witness::TreeRecurrence { vertex, pivot, vertices } => json!({
                "kind": "tree_recurrence",
                "vertex": vertex + 1,
                "pivot": format_rational(pivot),
                "vertices": one(vertices),
            }),
        };
        out["rule"] = json!(self.rule());
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationResult {
    /// Number of vertices of the input.
    pub order: usize,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// Minor sequence `p_0, p_1, …` that settled the verdict, if one did.
    pub minors: Vec<Rational>,
}

impl ClassificationResult {
    pub fn is_positive_definite(&self) -> bool {
        self.verdict.is_positive_definite()
    }

    /// Report JSON with the given rendering of the input diagram.
    pub fn to_json(&self, input: Value) -> Value {
        let (verdict, family) = match &self.verdict {
            Verdict::PositiveDefinite { family, .. } => ("PositiveDefinite", Some(family.to_string())),
            Verdict::NotPositiveDefinite => ("NotPositiveDefinite", None),
        };
        json!({
            "input": input,
            "verdict": verdict,
            "family": family,
            "rank": self.order,
            "witness": self.witness.as_ref().map(Witness::to_json),
            "minors": self.minors.iter().map(format_rational).collect::<Vec<_>>(),
        })
    }
}
