//! Clique-number bounds and k-core reduction used to prune the decomposition.

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, VertexSet};

/// Maximal induced subgraph whose vertices all have degree at least `k`.
pub fn k_core(g: &Graph, k: usize) -> Graph {
    if k == 0 {
        return g.clone();
    }
    let n = g.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|i| g.local_adj(i).len()).collect();
    let mut removed = vec![false; n];
    let mut queue: Vec<usize> = (0..n).filter(|&i| degree[i] < k).collect();
    for &i in &queue {
        removed[i] = true;
    }
    while let Some(i) = queue.pop() {
        for &j in g.local_adj(i) {
            if !removed[j] {
                degree[j] -= 1;
                if degree[j] < k {
                    removed[j] = true;
                    queue.push(j);
                }
            }
        }
    }
    let keep: Vec<usize> = (0..n).filter(|&i| !removed[i]).collect();
    g.induced_by_indices(&keep)
}

/// Extends the clique `start` greedily: repeatedly adds the highest-degree
/// vertex adjacent to everything chosen so far, smallest id on ties.
/// `start` must already be a clique of `g`.
pub(crate) fn grow_clique(g: &Graph, start: VertexSet) -> VertexSet {
    let n = g.vertex_count();
    let chosen: Vec<usize> = start.iter().filter_map(|&v| g.index_of(v)).collect();
    let mut candidate = vec![true; n];
    for &c in &chosen {
        candidate[c] = false;
        let mut adjacent = vec![false; n];
        for &j in g.local_adj(c) {
            adjacent[j] = true;
        }
        for (i, keep) in candidate.iter_mut().enumerate() {
            *keep &= adjacent[i];
        }
    }
    let mut clique = start;
    loop {
        // ascending scan with strict > keeps the smallest id on degree ties
        let mut best: Option<usize> = None;
        for i in (0..n).filter(|&i| candidate[i]) {
            if best.is_none_or(|b| g.local_adj(i).len() > g.local_adj(b).len()) {
                best = Some(i);
            }
        }
        let Some(b) = best else { break };
        clique.insert(g.id_at(b));
        candidate[b] = false;
        let mut adjacent = vec![false; n];
        for &j in g.local_adj(b) {
            adjacent[j] = true;
        }
        for (i, keep) in candidate.iter_mut().enumerate() {
            *keep &= adjacent[i];
        }
    }
    clique
}

/// Greedy clique grown from the highest-degree vertex.
pub fn greedy_clique_lower_bound(g: &Graph) -> VertexSet {
    grow_clique(g, VertexSet::new())
}

/// Sequential greedy coloring in largest-degree-first order (smallest id on
/// ties); returns the number of colors used.
pub fn greedy_coloring_upper_bound(g: &Graph) -> usize {
    let n = g.vertex_count();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(g.local_adj(i).len()));
    let mut color = vec![usize::MAX; n];
    let mut used = 0;
    let mut taken = vec![false; n + 1];
    for &i in &order {
        for &j in g.local_adj(i) {
            if color[j] != usize::MAX {
                taken[color[j]] = true;
            }
        }
        let c = taken.iter().position(|&t| !t).expect("n + 1 slots always leave one free");
        color[i] = c;
        used = used.max(c + 1);
        for &j in g.local_adj(i) {
            if color[j] != usize::MAX {
                taken[color[j]] = false;
            }
        }
    }
    used
}

/// Largest `k` with `k(k-1)/2 <= |E|`; zero for the graph with no vertices.
pub fn edge_count_upper_bound(g: &Graph) -> usize {
    if g.is_empty() {
        return 0;
    }
    let e = g.edge_count() as u64;
    isqrt(8 * e + 1).div_ceil(2) as usize
}

fn isqrt(x: u64) -> u64 {
    let mut r = (x as f64).sqrt() as u64;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

pub fn upper_bound(g: &Graph) -> usize {
    greedy_coloring_upper_bound(g).min(edge_count_upper_bound(g)).min(g.vertex_count())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpperMethod {
    Coloring,
    EdgeCount,
    VertexCount,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub lower: usize,
    pub witness: VertexSet,
    pub upper: usize,
    pub upper_method: UpperMethod,
}

impl BoundReport {
    pub fn compute(g: &Graph) -> Self {
        let witness = greedy_clique_lower_bound(g);
        let candidates = [
            (g.vertex_count(), UpperMethod::VertexCount),
            (edge_count_upper_bound(g), UpperMethod::EdgeCount),
            (greedy_coloring_upper_bound(g), UpperMethod::Coloring),
        ];
        let (upper, upper_method) = candidates.into_iter().min_by_key(|c| c.0).unwrap();
        BoundReport { lower: witness.len(), witness, upper, upper_method }
    }
}
