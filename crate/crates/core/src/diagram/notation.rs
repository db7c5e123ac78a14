//! The inline diagram notation.
//!
//! ```text
//! diagram := branch ( ' '+ branch )* ;     components separated by spaces
//! branch  := node | chain ;
//! chain   := '*' ( edge '*' )* ;
//! edge    := '-' | '=' | '#' ;              '≡' is accepted for '#'
//! dedge   := edge | '=>' | '<=' | '#>' | '<#' ;
//! node    := '(' branch ',' branch ')' '>' '*' ( '-' chain )? ;
//! ```
//!
//! Vertices are numbered in reading order. A node is joined by single
//! lines to the rightmost vertex of each parenthesised branch and to the
//! first vertex of its tail. `u=>v` means `A_uv = -m`, `A_vu = -1`.

use std::collections::BTreeMap;

use super::{CoxeterDiagram, DiagramError, DynkinDiagram};

/// Result of [`parse_diagram`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedDiagram {
    Coxeter(CoxeterDiagram),
    Dynkin(DynkinDiagram),
}

/// Parses the inline notation. In undirected mode arrow tokens are an
/// error; in directed mode every multiple edge must carry one.
pub fn parse_diagram(text: &str, directed: bool) -> Result<ParsedDiagram, DiagramError> {
    let mut p = Parser::new(text, directed);
    p.diagram()?;
    let cox = CoxeterDiagram::new(p.next_vertex, p.edges.iter().map(|&(u, v, m)| (u, v, m)))?;
    if directed {
        Ok(ParsedDiagram::Dynkin(DynkinDiagram::new(cox, &p.directions)?))
    } else {
        Ok(ParsedDiagram::Coxeter(cox))
    }
}

/// Parses with arrow tokens allowed but not required; returns the
/// directions that were given.
pub fn parse_with_directions(text: &str) -> Result<(CoxeterDiagram, Vec<(usize, usize)>), DiagramError> {
    let mut p = Parser::new(text, true);
    p.diagram()?;
    let cox = CoxeterDiagram::new(p.next_vertex, p.edges.iter().map(|&(u, v, m)| (u, v, m)))?;
    Ok((cox, p.directions))
}

impl std::str::FromStr for CoxeterDiagram {
    type Err = DiagramError;

    /// Undirected notation; arrow tokens are rejected.
    fn from_str(text: &str) -> Result<Self, DiagramError> {
        match parse_diagram(text, false)? {
            ParsedDiagram::Coxeter(d) => Ok(d),
            ParsedDiagram::Dynkin(d) => Ok(d.coxeter().clone()),
        }
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    directed: bool,
    next_vertex: usize,
    edges: Vec<(usize, usize, u8)>,
    directions: Vec<(usize, usize)>,
}

/// An edge token: multiplicity and, for arrows, whether it points right.
struct EdgeToken {
    m: u8,
    arrow: Option<bool>,
}

impl Parser {
    fn new(text: &str, directed: bool) -> Self {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
            directed,
            next_vertex: 0,
            edges: Vec::new(),
            directions: Vec::new(),
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, DiagramError> {
        Err(DiagramError::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_spaces(&mut self) -> bool {
        let start = self.pos;
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
        self.pos > start
    }

    fn expect(&mut self, c: char) -> Result<(), DiagramError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.err(format!("expected '{c}', found '{found}'")),
                None => self.err(format!("expected '{c}', found end of input")),
            }
        }
    }

    fn vertex(&mut self) -> Result<usize, DiagramError> {
        self.expect('*')?;
        self.next_vertex += 1;
        Ok(self.next_vertex - 1)
    }

    fn diagram(&mut self) -> Result<(), DiagramError> {
        self.skip_spaces();
        if self.peek().is_none() {
            return self.err("empty diagram");
        }
        loop {
            self.branch()?;
            let spaced = self.skip_spaces();
            match self.peek() {
                None => return Ok(()),
                Some(_) if spaced => continue,
                Some(c) => return self.err(format!("unexpected '{c}'")),
            }
        }
    }

    /// Returns the rightmost vertex of the branch.
    fn branch(&mut self) -> Result<usize, DiagramError> {
        match self.peek() {
            Some('(') => self.node(),
            Some('*') => Ok(self.chain()?.1),
            Some(c) => self.err(format!("expected '*' or '(', found '{c}'")),
            None => self.err("expected '*' or '(', found end of input"),
        }
    }

    fn edge_token(&mut self) -> Result<Option<EdgeToken>, DiagramError> {
        let start = self.pos;
        let (m, arrow) = match self.peek() {
            Some('-') => (1, None),
            Some('=') => (2, None),
            Some('#') | Some('≡') => (3, None),
            Some('<') => {
                self.pos += 1;
                match self.peek() {
                    Some('=') => (2, Some(false)),
                    Some('#') | Some('≡') => (3, Some(false)),
                    _ => return self.err("expected '=' or '#' after '<'"),
                }
            }
            _ => return Ok(None),
        };
        self.pos += 1;
        let arrow = if arrow.is_none() && m >= 2 && self.peek() == Some('>') {
            self.pos += 1;
            Some(true)
        } else {
            arrow
        };
        if arrow.is_some() && !self.directed {
            return Err(DiagramError::DirectedInUndirected { pos: start });
        }
        Ok(Some(EdgeToken { m, arrow }))
    }

    fn add_edge(&mut self, left: usize, right: usize, tok: EdgeToken) {
        self.edges.push((left, right, tok.m));
        match tok.arrow {
            // left=>right: A_left,right = -m, so (p, q) = (right, left)
            Some(true) => self.directions.push((right, left)),
            Some(false) => self.directions.push((left, right)),
            None => {}
        }
    }

    /// Returns (first, last) vertex of the chain.
    fn chain(&mut self) -> Result<(usize, usize), DiagramError> {
        let first = self.vertex()?;
        let mut last = first;
        while let Some(tok) = self.edge_token()? {
            let next = self.vertex()?;
            self.add_edge(last, next, tok);
            last = next;
        }
        Ok((first, last))
    }

    fn node(&mut self) -> Result<usize, DiagramError> {
        self.expect('(')?;
        let a = self.branch()?;
        self.expect(',')?;
        let b = self.branch()?;
        self.expect(')')?;
        self.expect('>')?;
        let node = self.vertex()?;
        self.edges.push((a, node, 1));
        self.edges.push((b, node, 1));
        let at = self.pos;
        match self.edge_token()? {
            None => Ok(node),
            Some(tok) if tok.m != 1 => {
                self.pos = at;
                self.err("only single lines may issue from a node")
            }
            Some(tok) => {
                let (first, last) = self.chain()?;
                self.add_edge(node, first, tok);
                Ok(last)
            }
        }
    }
}

/// Prints a Coxeter diagram in the inline notation.
///
/// Paths are read in the direction whose multiplicity sequence is
/// lexicographically larger (`*=*-*` rather than `*-*=*`). A diagram with
/// nodes is printed around the node whose tail is longest; inside
/// parentheses the branch with more vertices comes first, ties broken by
/// the printed text. Cycles, vertices of degree above 3, and nodes with a
/// multiple line are not expressible.
pub fn print_diagram(d: &CoxeterDiagram) -> Result<String, DiagramError> {
    Printer { d, directions: &BTreeMap::new() }.print()
}

/// Like [`print_diagram`] with arrow tokens on multiple edges.
pub fn print_dynkin(d: &DynkinDiagram) -> Result<String, DiagramError> {
    Printer { d: d.coxeter(), directions: &d.directions }.print()
}

struct Printer<'a> {
    d: &'a CoxeterDiagram,
    directions: &'a BTreeMap<(usize, usize), (usize, usize)>,
}

/// A rendered piece with its vertex count.
#[derive(Clone)]
struct Piece {
    text: String,
    size: usize,
}

impl Printer<'_> {
    fn print(&self) -> Result<String, DiagramError> {
        if !self.d.is_forest() {
            return Err(DiagramError::NotExpressible("diagram has a cycle".into()));
        }
        let adj = self.d.adjacency();
        let mut parts = Vec::new();
        for comp in self.d.components() {
            parts.push(self.component(&comp, &adj)?);
        }
        Ok(parts.join(" "))
    }

    /// Token for the edge read from `left` to `right`.
    fn token(&self, left: usize, right: usize) -> &'static str {
        let m = self.d.multiplicity(left, right);
        let dir = self.directions.get(&(left.min(right), left.max(right)));
        match (m, dir) {
            (1, _) => "-",
            (2, None) => "=",
            (3, None) => "#",
            // (p, q) = (right, left) means left=>right
            (2, Some(&(p, _))) if p == right => "=>",
            (2, Some(_)) => "<=",
            (3, Some(&(p, _))) if p == right => "#>",
            (3, Some(_)) => "<#",
            _ => unreachable!("multiplicity in 1..=3"),
        }
    }

    fn component(&self, comp: &[usize], adj: &[Vec<(usize, u8)>]) -> Result<String, DiagramError> {
        if comp.len() == 1 {
            return Ok("*".into());
        }
        if let Some(v) = comp.iter().find(|&&v| adj[v].len() > 3) {
            return Err(DiagramError::NotExpressible(format!("vertex {} has degree {}", v + 1, adj[*v].len())));
        }
        let ends: Vec<usize> = comp.iter().copied().filter(|&v| adj[v].len() == 1).collect();
        if comp.iter().all(|&v| adj[v].len() <= 2) {
            return Ok(self.best_path(&ends, adj));
        }
        let mut best: Option<(usize, String)> = None;
        for &node in comp.iter().filter(|&&v| adj[v].len() == 3) {
            for &(tail, m) in &adj[node] {
                if m != 1 || !self.is_path_away(tail, node, adj) {
                    continue;
                }
                let others: Vec<usize> = adj[node].iter().map(|&(c, _)| c).filter(|&c| c != tail).collect();
                let Ok(text) = self.node_text(node, &others, adj) else { continue };
                let tail_path = self.walk(tail, node, adj);
                let mut text = text;
                let mut prev = node;
                for &v in &tail_path {
                    text.push_str(self.token(prev, v));
                    text.push('*');
                    prev = v;
                }
                let key = (tail_path.len(), text);
                if best.as_ref().is_none_or(|b| (b.0, &b.1) < (key.0, &key.1)) {
                    best = Some(key);
                }
            }
        }
        best.map(|b| b.1)
            .ok_or_else(|| DiagramError::NotExpressible("no node admits the notation".into()))
    }

    fn best_path(&self, ends: &[usize], adj: &[Vec<(usize, u8)>]) -> String {
        let render = |start: usize| {
            let mut path = vec![start];
            path.extend(self.walk(adj[start][0].0, start, adj));
            let mults: Vec<u8> = path.windows(2).map(|w| self.d.multiplicity(w[0], w[1])).collect();
            let mut text = String::from("*");
            for w in path.windows(2) {
                text.push_str(self.token(w[0], w[1]));
                text.push('*');
            }
            (mults, text)
        };
        let a = render(ends[0]);
        let b = render(ends[1]);
        if (&b.0, &b.1) > (&a.0, &a.1) {
            b.1
        } else {
            a.1
        }
    }

    /// Vertices from `start` away from `from` while the degree stays ≤ 2.
    fn walk(&self, start: usize, from: usize, adj: &[Vec<(usize, u8)>]) -> Vec<usize> {
        let mut out = vec![start];
        let (mut prev, mut cur) = (from, start);
        while let Some(&(next, _)) = adj[cur].iter().find(|&&(n, _)| n != prev) {
            if adj[cur].len() > 2 {
                break;
            }
            out.push(next);
            prev = cur;
            cur = next;
        }
        out
    }

    fn is_path_away(&self, start: usize, from: usize, adj: &[Vec<(usize, u8)>]) -> bool {
        let (mut prev, mut cur) = (from, start);
        loop {
            let rest: Vec<usize> = adj[cur].iter().map(|&(n, _)| n).filter(|&n| n != prev).collect();
            match rest.as_slice() {
                [] => return true,
                [next] => {
                    prev = cur;
                    cur = *next;
                }
                _ => return false,
            }
        }
    }

    /// `(B1,B2)>*` for `node` with the two parenthesised neighbours.
    fn node_text(&self, node: usize, branches: &[usize], adj: &[Vec<(usize, u8)>]) -> Result<String, DiagramError> {
        let mut pieces = Vec::new();
        for &c in branches {
            if self.d.multiplicity(c, node) != 1 {
                return Err(DiagramError::NotExpressible("multiple line at a node".into()));
            }
            pieces.push(self.rightmost(c, node, adj)?);
        }
        pieces.sort_by(|a, b| b.size.cmp(&a.size).then_with(|| a.text.cmp(&b.text)));
        Ok(format!("({},{})>*", pieces[0].text, pieces[1].text))
    }

    /// Renders the subtree at `v` (away from `parent`) so that `v` is its
    /// rightmost vertex.
    fn rightmost(&self, v: usize, parent: usize, adj: &[Vec<(usize, u8)>]) -> Result<Piece, DiagramError> {
        // Walk away from the parent through degree-2 vertices.
        let mut path = vec![v];
        let (mut prev, mut cur) = (parent, v);
        let fork: Vec<usize> = loop {
            let rest: Vec<usize> = adj[cur].iter().map(|&(n, _)| n).filter(|&n| n != prev).collect();
            match rest.len() {
                0 => break Vec::new(),
                1 => {
                    prev = cur;
                    cur = rest[0];
                    path.push(cur);
                }
                2 => break rest,
                _ => return Err(DiagramError::NotExpressible(format!("vertex {} has degree > 3", cur + 1))),
            }
        };
        // path runs v → far end; printed left to right it is reversed.
        let far = *path.last().unwrap();
        let mut text;
        let mut size = path.len();
        if fork.is_empty() {
            text = String::from("*");
        } else {
            text = self.node_text(far, &fork, adj)?;
            size += fork.iter().map(|&c| self.subtree_size(c, far, adj)).sum::<usize>();
        }
        for w in path.windows(2).rev() {
            text.push_str(self.token(w[1], w[0]));
            text.push('*');
        }
        Ok(Piece { text, size })
    }

    fn subtree_size(&self, v: usize, parent: usize, adj: &[Vec<(usize, u8)>]) -> usize {
        1 + adj[v]
            .iter()
            .filter(|&&(n, _)| n != parent)
            .map(|&(n, _)| self.subtree_size(n, v, adj))
            .sum::<usize>()
    }
}
