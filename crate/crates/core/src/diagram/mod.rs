//! Coxeter and Dynkin diagrams.
//!
//! A [`CoxeterDiagram`] is an undirected graph whose edges carry a
//! multiplicity 1..=3. A [`DynkinDiagram`] adds a direction to every
//! multiple edge. The direction `(p, q)` of an edge of multiplicity `m`
//! stands for `A_pq = -1`, `A_qp = -m`.

mod notation;

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cartan::{find_isomorphism, CartanMatrix};
use crate::{Qf, QfMatrix, Rational, SymCartanMatrix};

pub use notation::{parse_diagram, parse_with_directions, print_diagram, print_dynkin, ParsedDiagram};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("edge {u}-{v} has multiplicity {m}, expected 1..=3")]
    Multiplicity { u: usize, v: usize, m: u32 },
    #[error("directed edge marker at position {pos} in undirected mode")]
    DirectedInUndirected { pos: usize },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("multiple edge {0}-{1} has no direction")]
    MissingDirection(usize, usize),
    #[error("direction {0}>{1} does not name a multiple edge")]
    BadDirection(usize, usize),
    #[error("diagram contains a cycle")]
    Cycle,
    #[error("diagram cannot be written in the inline notation: {0}")]
    NotExpressible(String),
    #[error("bad orientation spec {0:?}")]
    BadOrientSpec(String),
    #[error("malformed diagram JSON: {0}")]
    Json(String),
}

/// An undirected edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub m: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoxeterDiagram {
    order: usize,
    // Sorted by (u, v).
    edges: Vec<Edge>,
}

impl CoxeterDiagram {
    /// Builds a diagram from `(u, v, m)` triples with 0-based vertices.
    pub fn new(order: usize, edges: impl IntoIterator<Item = (usize, usize, u8)>) -> Result<Self, DiagramError> {
        let mut out: Vec<Edge> = Vec::new();
        for (a, b, m) in edges {
            if a >= order {
                return Err(DiagramError::VertexOutOfRange(a + 1));
            }
            if b >= order {
                return Err(DiagramError::VertexOutOfRange(b + 1));
            }
            if a == b {
                return Err(DiagramError::SelfLoop(a + 1));
            }
            if !(1..=3).contains(&m) {
                return Err(DiagramError::Multiplicity { u: a + 1, v: b + 1, m: m.into() });
            }
            let (u, v) = (a.min(b), a.max(b));
            if out.iter().any(|e| e.u == u && e.v == v) {
                return Err(DiagramError::DuplicateEdge(u + 1, v + 1));
            }
            out.push(Edge { u, v, m });
        }
        out.sort();
        Ok(CoxeterDiagram { order, edges: out })
    }

    /// Path `0 - 1 - … - n` with the given multiplicities.
    pub fn chain(mults: &[u8]) -> Self {
        Self::new(mults.len() + 1, mults.iter().enumerate().map(|(i, &m)| (i, i + 1, m)))
            .expect("valid chain")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn multiplicity(&self, i: usize, j: usize) -> u8 {
        let (u, v) = (i.min(j), i.max(j));
        self.edges.iter().find(|e| e.u == u && e.v == v).map_or(0, |e| e.m)
    }

    pub fn adjacency(&self) -> Vec<Vec<(usize, u8)>> {
        let mut adj = vec![Vec::new(); self.order];
        for e in &self.edges {
            adj[e.u].push((e.v, e.m));
            adj[e.v].push((e.u, e.m));
        }
        adj
    }

    /// Multiplicity matrix, zero on the diagonal.
    pub fn multiplicity_matrix(&self) -> Vec<Vec<u8>> {
        let mut m = vec![vec![0u8; self.order]; self.order];
        for e in &self.edges {
            m[e.u][e.v] = e.m;
            m[e.v][e.u] = e.m;
        }
        m
    }

    /// Sum of multiplicities of the lines at `i`.
    pub fn weighted_degree(&self, i: usize) -> u32 {
        self.edges.iter().filter(|e| e.u == i || e.v == i).map(|e| u32::from(e.m)).sum()
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.order];
        let mut out = Vec::new();
        for s in 0..self.order {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut block = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(i) = queue.pop_front() {
                for &(j, _) in &adj[i] {
                    if !seen[j] {
                        seen[j] = true;
                        block.push(j);
                        queue.push_back(j);
                    }
                }
            }
            block.sort_unstable();
            out.push(block);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn is_forest(&self) -> bool {
        self.edges.len() + self.components().len() == self.order
    }

    /// Subdiagram induced on `vertices`; vertex `k` of the result is
    /// `vertices[k]` of `self`.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let pos = |x: usize| vertices.iter().position(|&y| y == x);
        let edges = self
            .edges
            .iter()
            .filter_map(|e| Some((pos(e.u)?, pos(e.v)?, e.m)));
        Self::new(vertices.len(), edges).expect("subdiagram of a valid diagram")
    }

    /// Same diagram with vertices renumbered: new vertex `k` is old `order[k]`.
    pub fn relabeled(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.order);
        self.induced(order)
    }

    /// Isomorphism as undirected multigraphs: `p` maps vertices of `self`
    /// to vertices of `other`.
    pub fn is_isomorphic(&self, other: &CoxeterDiagram) -> Option<Vec<usize>> {
        find_isomorphism(&self.multiplicity_matrix(), &other.multiplicity_matrix())
    }

    /// Symmetrised Cartan matrix with rows in the given vertex order:
    /// `B_ii = 2`, `B_ij = -√m_ij`.
    pub fn to_sym_ordered(&self, order: &[usize]) -> SymCartanMatrix {
        assert_eq!(order.len(), self.order, "order must list every vertex once");
        let radicals: Vec<Qf> = (0..=3u8)
            .map(|m| -Qf::surd(&Rational::from_integer(m.into())).unwrap())
            .collect();
        let mm = self.multiplicity_matrix();
        let b = QfMatrix::from_fn(self.order, |i, j| {
            if i == j {
                Qf::from_i64(2)
            } else {
                radicals[mm[order[i]][order[j]] as usize].clone()
            }
        });
        SymCartanMatrix::from_symmetric(b)
    }

    /// [`Self::to_sym_ordered`] in the diagram's own vertex order.
    pub fn to_sym(&self) -> SymCartanMatrix {
        self.to_sym_ordered(&(0..self.order).collect::<Vec<_>>())
    }

    /// Cartan matrix with `A_pq = -1`, `A_qp = -m` for every `(p, q)` in
    /// `directions` and `-1` on both sides of single lines.
    ///
    /// Every multiple edge needs exactly one direction, and the diagram
    /// must be a forest (on a cycle the scale factors need not agree).
    pub fn orient(&self, directions: &[(usize, usize)]) -> Result<CartanMatrix, DiagramError> {
        if !self.is_forest() {
            return Err(DiagramError::Cycle);
        }
        let mut a = vec![vec![0i64; self.order]; self.order];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut dir_of: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
        for &(p, q) in directions {
            if p >= self.order || q >= self.order || self.multiplicity(p, q) < 2 {
                return Err(DiagramError::BadDirection(p + 1, q + 1));
            }
            let key = (p.min(q), p.max(q));
            if dir_of.insert(key, (p, q)).is_some() {
                return Err(DiagramError::BadDirection(p + 1, q + 1));
            }
        }
        for e in &self.edges {
            let m = i64::from(e.m);
            if e.m == 1 {
                a[e.u][e.v] = -1;
                a[e.v][e.u] = -1;
                continue;
            }
            let &(p, q) = dir_of.get(&(e.u, e.v)).ok_or(DiagramError::MissingDirection(e.u + 1, e.v + 1))?;
            a[p][q] = -1;
            a[q][p] = -m;
        }
        Ok(CartanMatrix::validate(a).expect("oriented diagram satisfies the axioms"))
    }

    pub fn to_json(&self) -> DiagramJson {
        DiagramJson {
            vertices: self.order,
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson { u: e.u + 1, v: e.v + 1, m: e.m, dir: None })
                .collect(),
        }
    }

    pub fn to_dot(&self) -> String {
        dot(self, &BTreeMap::new())
    }
}

/// A Coxeter diagram with a direction on every multiple edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DynkinDiagram {
    coxeter: CoxeterDiagram,
    // Keyed by (u, v) with u < v; value is (p, q).
    directions: BTreeMap<(usize, usize), (usize, usize)>,
}

impl DynkinDiagram {
    pub fn new(coxeter: CoxeterDiagram, directions: &[(usize, usize)]) -> Result<Self, DiagramError> {
        let mut map = BTreeMap::new();
        for &(p, q) in directions {
            if p >= coxeter.order || q >= coxeter.order || coxeter.multiplicity(p, q) < 2 {
                return Err(DiagramError::BadDirection(p + 1, q + 1));
            }
            if map.insert((p.min(q), p.max(q)), (p, q)).is_some() {
                return Err(DiagramError::BadDirection(p + 1, q + 1));
            }
        }
        if let Some(e) = coxeter.edges.iter().find(|e| e.m >= 2 && !map.contains_key(&(e.u, e.v))) {
            return Err(DiagramError::MissingDirection(e.u + 1, e.v + 1));
        }
        Ok(DynkinDiagram { coxeter, directions: map })
    }

    /// Reads the diagram off a Cartan matrix: `m_ij = A_ij A_ji` lines, and
    /// for multiple lines the direction `(p, q)` with `A_pq = -1`.
    pub fn of_cartan(a: &CartanMatrix) -> Self {
        let l = a.rank();
        let mut edges = Vec::new();
        let mut directions = BTreeMap::new();
        for i in 0..l {
            for j in (i + 1)..l {
                let m = a.multiplicity(i, j);
                if m == 0 {
                    continue;
                }
                edges.push((i, j, m));
                if m >= 2 {
                    let pq = if a.entry(i, j) == -1 { (i, j) } else { (j, i) };
                    directions.insert((i, j), pq);
                }
            }
        }
        DynkinDiagram {
            coxeter: CoxeterDiagram::new(l, edges).expect("Cartan matrix gives a valid diagram"),
            directions,
        }
    }

    pub fn coxeter(&self) -> &CoxeterDiagram {
        &self.coxeter
    }

    /// Directions `(p, q)` of the multiple edges, ordered by edge.
    pub fn directions(&self) -> Vec<(usize, usize)> {
        self.directions.values().copied().collect()
    }

    pub fn direction(&self, u: usize, v: usize) -> Option<(usize, usize)> {
        self.directions.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn to_cartan(&self) -> Result<CartanMatrix, DiagramError> {
        self.coxeter.orient(&self.directions())
    }

    /// `|A_ij|`-style matrix: `1` toward `q` and `m` toward `p` for a
    /// direction `(p, q)`; symmetric `m` for single lines.
    fn signature_matrix(&self) -> Vec<Vec<u8>> {
        let mut m = self.coxeter.multiplicity_matrix();
        for &(p, q) in self.directions.values() {
            m[p][q] = 1;
        }
        m
    }

    pub fn is_isomorphic(&self, other: &DynkinDiagram) -> Option<Vec<usize>> {
        find_isomorphism(&self.signature_matrix(), &other.signature_matrix())
    }

    pub fn to_json(&self) -> DiagramJson {
        let mut json = self.coxeter.to_json();
        for e in &mut json.edges {
            e.dir = self.direction(e.u - 1, e.v - 1).map(|(p, _)| {
                if p + 1 == e.u {
                    EdgeDirection::Uv
                } else {
                    EdgeDirection::Vu
                }
            });
        }
        json
    }

    pub fn from_json(s: &str) -> Result<Self, DiagramError> {
        let json: DiagramJson = serde_json::from_str(s).map_err(|e| DiagramError::Json(e.to_string()))?;
        json.into_dynkin()
    }

    pub fn to_dot(&self) -> String {
        dot(&self.coxeter, &self.directions)
    }
}

/// `"uv"` names the direction `(p, q) = (u, v)`, i.e. `A_uv = -1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeDirection {
    #[serde(rename = "uv")]
    Uv,
    #[serde(rename = "vu")]
    Vu,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub u: usize,
    pub v: usize,
    pub m: u8,
    pub dir: Option<EdgeDirection>,
}

/// `{"vertices": l, "edges": [{"u": i, "v": j, "m": m, "dir": "uv"|"vu"|null}]}`
/// with 1-based vertex numbers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub vertices: usize,
    pub edges: Vec<EdgeJson>,
}

impl DiagramJson {
    fn edge_triples(&self) -> Result<Vec<(usize, usize, u8)>, DiagramError> {
        self.edges
            .iter()
            .map(|e| {
                if e.u == 0 || e.v == 0 {
                    return Err(DiagramError::VertexOutOfRange(0));
                }
                Ok((e.u - 1, e.v - 1, e.m))
            })
            .collect()
    }

    pub fn into_coxeter(self) -> Result<CoxeterDiagram, DiagramError> {
        CoxeterDiagram::new(self.vertices, self.edge_triples()?)
    }

    pub fn into_dynkin(self) -> Result<DynkinDiagram, DiagramError> {
        let cox = CoxeterDiagram::new(self.vertices, self.edge_triples()?)?;
        let dirs: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter_map(|e| {
                e.dir.map(|d| match d {
                    EdgeDirection::Uv => (e.u - 1, e.v - 1),
                    EdgeDirection::Vu => (e.v - 1, e.u - 1),
                })
            })
            .collect();
        DynkinDiagram::new(cox, &dirs)
    }
}

/// Parses `"i>j[,i>j...]"` (1-based) into directions. `i>j` follows the
/// inline notation `i=>j`: `A_ij = -m` and `A_ji = -1`, so the direction
/// pair is `(j, i)`.
pub fn parse_orient_spec(spec: &str) -> Result<Vec<(usize, usize)>, DiagramError> {
    let bad = || DiagramError::BadOrientSpec(spec.to_string());
    if spec.trim().is_empty() {
        return Ok(Vec::new());
    }
    spec.split(',')
        .map(|part| {
            let (i, j) = part.trim().split_once('>').ok_or_else(bad)?;
            let i: usize = i.trim().parse().map_err(|_| bad())?;
            let j: usize = j.trim().parse().map_err(|_| bad())?;
            if i == 0 || j == 0 {
                return Err(bad());
            }
            Ok((j - 1, i - 1))
        })
        .collect()
}

fn dot(d: &CoxeterDiagram, directions: &BTreeMap<(usize, usize), (usize, usize)>) -> String {
    let mut out = String::from("graph dynkin {\n");
    for v in 0..d.order {
        let _ = writeln!(out, "  {};", v + 1);
    }
    for e in &d.edges {
        match directions.get(&(e.u, e.v)) {
            // A_qp = -m: the arrow runs from q to p, as in q=>p.
            Some(&(p, q)) => {
                let _ = writeln!(out, "  {} -- {} [mult={}, dir=forward, arrowhead=normal];", q + 1, p + 1, e.m);
            }
            None => {
                let _ = writeln!(out, "  {} -- {} [mult={}];", e.u + 1, e.v + 1, e.m);
            }
        }
    }
    out.push_str("}\n");
    out
}
