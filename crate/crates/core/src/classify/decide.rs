use std::collections::VecDeque;

use num_traits::{One, Zero};

use super::{
    minor_sequence, node_reduce, ClassificationResult, ClassifyError, Family, GenCoxeterDiagram, NodeCase, Verdict,
    Witness,
};
use crate::scalar::Sign;
use crate::{CoxeterDiagram, Qf, Rational};

fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn pd(d: &CoxeterDiagram, family: Family, minors: Vec<Rational>) -> ClassificationResult {
    ClassificationResult {
        order: d.order(),
        verdict: Verdict::PositiveDefinite { family, rank: d.order() },
        witness: None,
        minors,
    }
}

fn not_pd(d: &CoxeterDiagram, witness: Witness, minors: Vec<Rational>) -> ClassificationResult {
    ClassificationResult { order: d.order(), verdict: Verdict::NotPositiveDefinite, witness: Some(witness), minors }
}

/// Decides positive definiteness of a connected Coxeter diagram.
///
/// Structural tests run first, in this order: a cycle (as many lines as
/// vertices), a vertex of degree above 3, the lone triple line of `G_2`,
/// two double lines, a double line together with a node, two nodes.
/// Chains are then settled by their minor sequence and single-node trees
/// by a node reduction followed by the minor sequence of the reduced
/// chain. The three node trees with branches `(1, b, c)`, `3 ≤ b ≤ c ≤ 4`
/// are settled by the leaf-first pivot recurrence, see [`tree_pivots`].
pub fn classify_connected(d: &CoxeterDiagram) -> Result<ClassificationResult, ClassifyError> {
    let l = d.order();
    if l == 0 || !d.is_connected() {
        return Err(ClassifyError::Disconnected);
    }
    if l == 1 {
        return Ok(pd(d, Family::A, vec![rat(1), rat(2)]));
    }
    let adj = d.adjacency();

    if d.edges().len() >= l {
        let cycle = find_cycle(&adj);
        let sub = d.induced(&cycle).to_sym();
        let ones = vec![Qf::one(); cycle.len()];
        let form_value = sub.matrix().bilinear(&ones, &ones);
        return Ok(not_pd(d, Witness::TooManyLines { lines: d.edges().len(), cycle, form_value }, vec![]));
    }

    if let Some(v) = (0..l).find(|&v| d.weighted_degree(v) > 3) {
        return Ok(not_pd(d, Witness::VertexDegree { vertex: v, degree: d.weighted_degree(v) }, vec![]));
    }

    // With degree at most 3 a triple line has nowhere else to attach.
    if d.edges().iter().any(|e| e.m == 3) {
        return Ok(pd(d, Family::G, vec![rat(1), rat(2), rat(1)]));
    }

    let doubles: Vec<(usize, usize)> = d.edges().iter().filter(|e| e.m == 2).map(|e| (e.u, e.v)).collect();
    if doubles.len() >= 2 {
        let path = double_to_double(d, &adj, doubles[0], doubles[1]);
        let t: Vec<Rational> = path.windows(2).map(|w| rat(d.multiplicity(w[0], w[1]).into())).collect();
        let minors = minor_sequence(&t).p;
        return Ok(not_pd(d, Witness::TwoDoubleLines { path }, minors));
    }

    let nodes: Vec<usize> = (0..l).filter(|&v| adj[v].len() >= 3).collect();
    if let (Some(&node), Some(&double_line)) = (nodes.first(), doubles.first()) {
        return Ok(not_pd(d, Witness::DoubleLineAndNode { double_line, node }, vec![]));
    }
    if nodes.len() >= 2 {
        return Ok(not_pd(d, Witness::TwoNodes { nodes }, vec![]));
    }

    match nodes.first() {
        None => Ok(classify_chain(d, &adj)),
        Some(&node) => classify_node(d, &adj, node),
    }
}

fn classify_chain(d: &CoxeterDiagram, adj: &[Vec<(usize, u8)>]) -> ClassificationResult {
    let l = d.order();
    let ends: Vec<usize> = (0..l).filter(|&v| adj[v].len() == 1).collect();
    let forward = walk(adj, ends[0], usize::MAX);
    let mults = |p: &[usize]| p.windows(2).map(|w| d.multiplicity(w[0], w[1])).collect::<Vec<u8>>();
    let backward: Vec<usize> = forward.iter().rev().copied().collect();
    let path = if mults(&backward) > mults(&forward) { backward } else { forward };
    let m = mults(&path);
    let t: Vec<Rational> = m.iter().map(|&x| rat(x.into())).collect();
    let seq = minor_sequence(&t);
    if let Some(index) = seq.first_nonpositive {
        let value = seq.p[index].clone();
        let witness = Witness::Minor { index, value, vertices: path, reduction: None, reduced: None };
        return not_pd(d, witness, seq.p);
    }
    let family = match m.iter().position(|&x| x == 2) {
        None => Family::A,
        Some(0) => Family::BC,
        Some(1) if l == 4 => Family::F,
        Some(_) => unreachable!("positive minors on a chain outside A, B/C and F"),
    };
    pd(d, family, seq.p)
}

fn classify_node(
    d: &CoxeterDiagram,
    adj: &[Vec<(usize, u8)>],
    node: usize,
) -> Result<ClassificationResult, ClassifyError> {
    let mut branches: Vec<Vec<usize>> = adj[node].iter().map(|&(c, _)| walk(adj, c, node)).collect();
    branches.sort_by_key(|b| (b.len(), b[0]));
    let (a, b, c) = (branches[0].len(), branches[1].len(), branches[2].len());
    let tail = || branches[2].iter().copied();

    if a == 1 && b == 1 {
        let order: Vec<usize> =
            [branches[0][0], branches[1][0], node].into_iter().chain(tail()).collect();
        let t = reduced_chain(d, &order, NodeCase::Y)?;
        // Vertex 0 splits off as an isolated A_1; the rest is the chain.
        let seq = minor_sequence(&t[1..]);
        if let Some(index) = seq.first_nonpositive {
            let value = seq.p[index].clone();
            return Ok(not_pd(d, reduction_witness(index, value, order, NodeCase::Y, d)?, seq.p));
        }
        return Ok(pd(d, Family::D, seq.p));
    }

    if a == 1 && (b == 2 || c >= 5) {
        // E-shape: the long branch stays whole, the middle one is cut to 2.
        let order: Vec<usize> = [branches[1][1], branches[1][0], branches[0][0], node].into_iter().chain(tail()).collect();
        let t = reduced_chain(d, &order, NodeCase::E)?;
        let seq = minor_sequence(&t);
        if let Some(index) = seq.first_nonpositive {
            let value = seq.p[index].clone();
            return Ok(not_pd(d, reduction_witness(index, value, order, NodeCase::E, d)?, seq.p));
        }
        debug_assert_eq!(order.len(), d.order());
        return Ok(pd(d, Family::E, seq.p));
    }

    if a == 1 {
        // Branches (1, b, c) with 3 ≤ b ≤ c ≤ 4 contain (1, 3, 3).
        let order: Vec<usize> = [node, branches[0][0]]
            .into_iter()
            .chain(branches[1][..3].iter().copied())
            .chain(branches[2][..3].iter().copied())
            .collect();
        let sub = d.induced(&order);
        let (pivots, fail) = tree_pivots(&sub, 0);
        let k = fail.expect("the (1, 3, 3) tree is not positive definite");
        let (v, pivot) = pivots[k].clone();
        let minors = cumulative(&pivots);
        return Ok(not_pd(d, Witness::TreeRecurrence { vertex: order[v], pivot, vertices: order }, minors));
    }

    // Every branch has length at least 2: cut the two shortest to 2.
    let order: Vec<usize> = [branches[0][1], branches[1][1], branches[0][0], branches[1][0], node]
        .into_iter()
        .chain(tail())
        .collect();
    let t = reduced_chain(d, &order, NodeCase::H)?;
    // Vertices 0..2 split off as an A_2; the chain starts at index 2.
    let seq = minor_sequence(&t[2..]);
    let index = seq.first_nonpositive.expect("the H-reduced chain has a double line inside");
    let value = seq.p[index].clone();
    Ok(not_pd(d, reduction_witness(index, value, order, NodeCase::H, d)?, seq.p))
}

fn reduced_chain(d: &CoxeterDiagram, order: &[usize], case: NodeCase) -> Result<Vec<Rational>, ClassifyError> {
    let b = d.induced(order).to_sym();
    let reduced = node_reduce(&b, case)?;
    GenCoxeterDiagram::from_matrix(&reduced)?
        .subdiagonal()
        .ok_or_else(|| ClassifyError::PatternMismatch(format!("{case} reduction did not give a chain")))
}

fn reduction_witness(
    index: usize,
    value: Rational,
    vertices: Vec<usize>,
    case: NodeCase,
    d: &CoxeterDiagram,
) -> Result<Witness, ClassifyError> {
    let reduced = node_reduce(&d.induced(&vertices).to_sym(), case)?;
    let reduced = GenCoxeterDiagram::from_matrix(&reduced)?.chain_text();
    Ok(Witness::Minor { index, value, vertices, reduction: Some(case), reduced })
}

/// Leaf-first pivots of `B` on a tree, rooted at `root`.
///
/// Eliminating a vertex after all its children leaves
/// `d_v = 2 - Σ m(v, c) / d_c` on the diagonal, so the pivots in
/// post-order are those of Gaussian elimination in that order and the
/// tree is positive definite exactly when all of them are positive.
/// Returns `(vertex, pivot)` pairs up to and including the first
/// non-positive one, and its position.
pub fn tree_pivots(d: &CoxeterDiagram, root: usize) -> (Vec<(usize, Rational)>, Option<usize>) {
    let adj = d.adjacency();
    let mut post = Vec::with_capacity(d.order());
    let mut parent = vec![usize::MAX; d.order()];
    let mut stack = vec![(root, false)];
    while let Some((v, done)) = stack.pop() {
        if done {
            post.push(v);
            continue;
        }
        stack.push((v, true));
        for &(c, _) in &adj[v] {
            if c != parent[v] {
                parent[c] = v;
                stack.push((c, false));
            }
        }
    }
    let mut pivot = vec![Rational::zero(); d.order()];
    let mut out = Vec::with_capacity(post.len());
    for v in post {
        let mut p = rat(2);
        for &(c, m) in &adj[v] {
            if c != parent[v] {
                p -= rat(m.into()) / &pivot[c];
            }
        }
        let positive = crate::Scalar::sign(&p) == Sign::Positive;
        pivot[v] = p.clone();
        out.push((v, p));
        if !positive {
            let k = out.len() - 1;
            return (out, Some(k));
        }
    }
    (out, None)
}

fn cumulative(pivots: &[(usize, Rational)]) -> Vec<Rational> {
    let mut out = vec![rat(1)];
    for (_, p) in pivots {
        let next = out.last().unwrap() * p;
        out.push(next);
    }
    out
}

/// Vertices of the path starting at `start`, leaving `from` behind.
fn walk(adj: &[Vec<(usize, u8)>], start: usize, from: usize) -> Vec<usize> {
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

fn tree_path(adj: &[Vec<(usize, u8)>], from: usize, to: usize) -> Vec<usize> {
    let mut parent = vec![usize::MAX; adj.len()];
    parent[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for &(n, _) in &adj[v] {
            if parent[n] == usize::MAX {
                parent[n] = v;
                queue.push_back(n);
            }
        }
    }
    let mut path = vec![to];
    while *path.last().unwrap() != from {
        path.push(parent[*path.last().unwrap()]);
    }
    path.reverse();
    path
}

/// A chain that starts and ends with a double line and has none inside.
fn double_to_double(
    d: &CoxeterDiagram,
    adj: &[Vec<(usize, u8)>],
    e1: (usize, usize),
    e2: (usize, usize),
) -> Vec<usize> {
    let mut path = tree_path(adj, e1.0, e2.0);
    if path.get(1) != Some(&e1.1) {
        path.insert(0, e1.1);
    }
    if path.len() < 2 || path[path.len() - 2] != e2.1 {
        path.push(e2.1);
    }
    let doubles: Vec<usize> = (0..path.len() - 1).filter(|&k| d.multiplicity(path[k], path[k + 1]) == 2).collect();
    path[doubles[0]..=doubles[1] + 1].to_vec()
}

/// Vertices of some cycle of a graph that has one.
fn find_cycle(adj: &[Vec<(usize, u8)>]) -> Vec<usize> {
    let n = adj.len();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    for s in 0..n {
        if depth[s] != usize::MAX {
            continue;
        }
        depth[s] = 0;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &(w, _) in &adj[v] {
                if w == parent[v] {
                    continue;
                }
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    parent[w] = v;
                    stack.push(w);
                } else {
                    // Non-tree edge: join the two tree paths at their meeting point.
                    let (mut a, mut b) = (v, w);
                    let (mut left, mut right) = (vec![a], vec![b]);
                    while a != b {
                        if depth[a] >= depth[b] {
                            a = parent[a];
                            left.push(a);
                        } else {
                            b = parent[b];
                            right.push(b);
                        }
                    }
                    right.pop();
                    right.reverse();
                    left.extend(right);
                    return left;
                }
            }
        }
    }
    Vec::new()
}
