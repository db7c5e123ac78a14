//! Connected diagrams up to isomorphism, for exhaustive checks.
//!
//! Trees are canonised by rooted codes at their centre, unicyclic graphs
//! by the cyclic sequence of (hanging tree, cycle line) pairs read from
//! the best starting point and direction. Each class is emitted once,
//! renumbered in the preorder of its code, and the stream is sorted by
//! order, line count and code.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::ClassifyError;
use crate::CoxeterDiagram;

/// Largest rank [`enumerate_connected`] accepts.
pub const DEFAULT_RANK_BOUND: usize = 9;

/// All connected trees with `1 ≤ l ≤ max_rank` and multiplicities 1 to 3,
/// plus with `include_cycles` all connected diagrams with exactly `l` lines.
pub fn enumerate_connected(max_rank: usize, include_cycles: bool) -> Result<Vec<CoxeterDiagram>, ClassifyError> {
    let cycles = if include_cycles { max_rank } else { 0 };
    enumerate_connected_bounded(max_rank, cycles, DEFAULT_RANK_BOUND)
}

/// Trees up to `max_rank` and one-cycle diagrams up to `cycle_rank`.
pub fn enumerate_connected_bounded(
    max_rank: usize,
    cycle_rank: usize,
    bound: usize,
) -> Result<Vec<CoxeterDiagram>, ClassifyError> {
    let worst = max_rank.max(cycle_rank);
    if worst > bound {
        return Err(ClassifyError::BoundExceeded { max_rank: worst, bound });
    }
    let mut out = Vec::new();
    let mut shapes = vec![CoxeterDiagram::new(1, []).unwrap()];
    for n in 1..=worst {
        if n > 1 {
            shapes = grow(&shapes);
        }
        if n <= max_rank {
            out.extend(labelings(&shapes, false));
        }
        if n >= 3 && n <= cycle_rank {
            out.extend(labelings(&close_cycles(&shapes), true));
        }
    }
    Ok(out)
}

/// Canonical code of a connected tree or one-cycle diagram.
pub fn canonical_code(d: &CoxeterDiagram) -> Option<String> {
    canonical(d).map(|(code, _)| code)
}

fn canonical(d: &CoxeterDiagram) -> Option<(String, Vec<usize>)> {
    if d.order() == 0 || !d.is_connected() {
        return None;
    }
    let l = d.order();
    match d.edges().len() {
        e if e + 1 == l => Some(tree_canonical(d)),
        e if e == l => Some(unicyclic_canonical(d)),
        _ => None,
    }
}

type Adj = Vec<Vec<(usize, u8)>>;

/// Code of the subtree at `v` away from `parent`, skipping `skip` vertices,
/// with its preorder.
fn rooted(adj: &Adj, v: usize, parent: usize, skip: &[bool]) -> (String, Vec<usize>) {
    let mut kids: Vec<(String, Vec<usize>)> = adj[v]
        .iter()
        .filter(|&&(c, _)| c != parent && !skip[c])
        .map(|&(c, m)| {
            let (code, order) = rooted(adj, c, v, skip);
            (format!("{m}{code}"), order)
        })
        .collect();
    kids.sort();
    let mut code = String::from("(");
    let mut order = vec![v];
    for (c, o) in kids {
        code.push_str(&c);
        order.extend(o);
    }
    code.push(')');
    (code, order)
}

fn tree_canonical(d: &CoxeterDiagram) -> (String, Vec<usize>) {
    let adj = d.adjacency();
    let skip = vec![false; d.order()];
    centres(&adj)
        .into_iter()
        .map(|c| rooted(&adj, c, usize::MAX, &skip))
        .min()
        .unwrap()
}

fn centres(adj: &Adj) -> Vec<usize> {
    let n = adj.len();
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut left = n;
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    while left > 2 {
        left -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            degree[v] = 0;
            for &(w, _) in &adj[v] {
                if degree[w] > 0 {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        layer = next;
    }
    layer
}

fn unicyclic_canonical(d: &CoxeterDiagram) -> (String, Vec<usize>) {
    let adj = d.adjacency();
    let n = d.order();
    // Strip leaves until only the cycle remains.
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut on_cycle = vec![true; n];
    let mut stack: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    while let Some(v) = stack.pop() {
        on_cycle[v] = false;
        for &(w, _) in &adj[v] {
            if on_cycle[w] {
                degree[w] -= 1;
                if degree[w] == 1 {
                    stack.push(w);
                }
            }
        }
    }
    let start = (0..n).find(|&v| on_cycle[v]).unwrap();
    let mut cycle = vec![start];
    let mut prev = usize::MAX;
    loop {
        let cur = *cycle.last().unwrap();
        let next = adj[cur].iter().map(|&(w, _)| w).find(|&w| on_cycle[w] && w != prev && w != cycle[0]);
        match next {
            Some(w) if !cycle.contains(&w) => {
                prev = cur;
                cycle.push(w);
            }
            _ => break,
        }
    }
    let k = cycle.len();
    let hanging: Vec<(String, Vec<usize>)> = cycle.iter().map(|&c| rooted(&adj, c, usize::MAX, &on_cycle_except(&on_cycle, c))).collect();
    let mut best: Option<(String, Vec<usize>)> = None;
    for s in 0..k {
        for dir in [1, k - 1] {
            let mut code = String::from("C");
            let mut order = Vec::with_capacity(n);
            for step in 0..k {
                let i = (s + step * dir) % k;
                let j = (s + (step + 1) * dir) % k;
                code.push_str(&hanging[i].0);
                code.push_str(&d.multiplicity(cycle[i], cycle[j]).to_string());
                order.extend(hanging[i].1.iter().copied());
            }
            if best.as_ref().is_none_or(|b| code < b.0) {
                best = Some((code, order));
            }
        }
    }
    best.unwrap()
}

fn on_cycle_except(on_cycle: &[bool], c: usize) -> Vec<bool> {
    let mut skip = on_cycle.to_vec();
    skip[c] = false;
    skip
}

/// Unlabelled trees with one more vertex.
fn grow(shapes: &[CoxeterDiagram]) -> Vec<CoxeterDiagram> {
    let mut seen = BTreeMap::new();
    for s in shapes {
        let n = s.order();
        for v in 0..n {
            let edges = s.edges().iter().map(|e| (e.u, e.v, 1)).chain([(v, n, 1)]);
            let t = CoxeterDiagram::new(n + 1, edges).unwrap();
            seen.entry(tree_canonical(&t).0).or_insert(t);
        }
    }
    seen.into_values().collect()
}

/// Unlabelled one-cycle graphs from trees by adding one line.
fn close_cycles(shapes: &[CoxeterDiagram]) -> Vec<CoxeterDiagram> {
    let mut seen = BTreeMap::new();
    for s in shapes {
        let n = s.order();
        for u in 0..n {
            for v in (u + 1)..n {
                if s.multiplicity(u, v) == 0 {
                    let edges = s.edges().iter().map(|e| (e.u, e.v, 1)).chain([(u, v, 1)]);
                    let g = CoxeterDiagram::new(n, edges).unwrap();
                    seen.entry(unicyclic_canonical(&g).0).or_insert(g);
                }
            }
        }
    }
    seen.into_values().collect()
}

/// Every multiplicity labelling of every shape, one per class, in code order.
fn labelings(shapes: &[CoxeterDiagram], cyclic: bool) -> Vec<CoxeterDiagram> {
    let per_shape: Vec<BTreeMap<String, CoxeterDiagram>> = shapes
        .par_iter()
        .map(|s| {
            let base: Vec<(usize, usize)> = s.edges().iter().map(|e| (e.u, e.v)).collect();
            let mut found = BTreeMap::new();
            let total = 3usize.pow(base.len() as u32);
            for code in 0..total {
                let mut c = code;
                let edges = base.iter().map(|&(u, v)| {
                    let m = (c % 3) as u8 + 1;
                    c /= 3;
                    (u, v, m)
                });
                let d = CoxeterDiagram::new(s.order(), edges.collect::<Vec<_>>()).unwrap();
                let (key, order) = if cyclic { unicyclic_canonical(&d) } else { tree_canonical(&d) };
                found.entry(key).or_insert_with(|| d.relabeled(&order));
            }
            found
        })
        .collect();
    let mut merged = BTreeMap::new();
    for m in per_shape {
        merged.extend(m);
    }
    merged.into_values().collect()
}
