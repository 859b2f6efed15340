//! Exact maximum clique: a coloring-bounded branch and bound for real use and
//! an exhaustive subset search kept as a test oracle.

use std::time::Instant;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Largest graph `max_clique_bruteforce` accepts.
pub const BRUTEFORCE_LIMIT: usize = 25;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliqueResult {
    pub clique: VertexSet,
    pub size: usize,
    /// Seconds.
    pub wall_time: f64,
}

impl CliqueResult {
    fn new(clique: VertexSet, started: Instant) -> Self {
        CliqueResult { size: clique.len(), clique, wall_time: started.elapsed().as_secs_f64() }
    }
}

/// Branch and bound in the style of Tomita's MCQ: candidates are greedily
/// colored and a branch is cut once `|current| + colors` cannot beat the
/// incumbent. Vertices are relabelled by non-increasing degree (smallest id on
/// ties) so the search order is fixed for a given graph.
pub fn max_clique_exact(g: &Graph) -> CliqueResult {
    let started = Instant::now();
    let n = g.vertex_count();
    if n == 0 {
        return CliqueResult::new(VertexSet::new(), started);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(g.local_adj(i).len()));
    let mut rank = vec![0; n];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    let adj: Vec<FixedBitSet> = order
        .iter()
        .map(|&i| {
            let mut row = FixedBitSet::with_capacity(n);
            for &j in g.local_adj(i) {
                row.insert(rank[j]);
            }
            row
        })
        .collect();

    let mut search = Search { adj, best: Vec::new(), current: Vec::new() };
    let mut all = FixedBitSet::with_capacity(n);
    all.insert_range(..);
    search.expand(all);

    let clique = search.best.iter().map(|&r| g.id_at(order[r])).collect();
    CliqueResult::new(clique, started)
}

struct Search {
    adj: Vec<FixedBitSet>,
    best: Vec<usize>,
    current: Vec<usize>,
}

impl Search {
    fn expand(&mut self, mut candidates: FixedBitSet) {
        let (verts, colors) = self.color_sort(&candidates);
        for idx in (0..verts.len()).rev() {
            if self.current.len() + colors[idx] <= self.best.len() {
                return;
            }
            let v = verts[idx];
            self.current.push(v);
            let mut next = candidates.clone();
            next.intersect_with(&self.adj[v]);
            if next.is_clear() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            candidates.set(v, false);
        }
    }

    /// Greedy color classes built in rank order; returns vertices sorted by
    /// color with the color number (1-based) of each.
    fn color_sort(&self, candidates: &FixedBitSet) -> (Vec<usize>, Vec<usize>) {
        let mut uncolored = candidates.clone();
        let mut verts = Vec::with_capacity(candidates.count_ones(..));
        let mut colors = Vec::with_capacity(verts.capacity());
        let mut color = 0;
        while !uncolored.is_clear() {
            color += 1;
            let mut available = uncolored.clone();
            while let Some(v) = available.ones().next() {
                available.set(v, false);
                available.difference_with(&self.adj[v]);
                uncolored.set(v, false);
                verts.push(v);
                colors.push(color);
            }
        }
        (verts, colors)
    }
}

/// Tries every subset from largest to smallest and returns the first clique
/// found (lexicographically smallest within its size). Sizes above
/// `max degree + 1` are skipped, and for size `s` only vertices of degree at
/// least `s - 1` are considered.
pub fn max_clique_bruteforce(g: &Graph) -> Result<CliqueResult> {
    let started = Instant::now();
    let n = g.vertex_count();
    if n > BRUTEFORCE_LIMIT {
        return Err(Error::TooLarge { size: n, limit: BRUTEFORCE_LIMIT });
    }
    if n == 0 {
        return Ok(CliqueResult::new(VertexSet::new(), started));
    }
    let masks: Vec<u32> = (0..n).map(|i| g.local_adj(i).iter().fold(0u32, |m, &j| m | (1 << j))).collect();
    let degree: Vec<usize> = (0..n).map(|i| g.local_adj(i).len()).collect();
    let top = degree.iter().copied().max().unwrap() + 1;
    for size in (1..=top).rev() {
        let pool: Vec<usize> = (0..n).filter(|&i| degree[i] + 1 >= size).collect();
        if pool.len() < size {
            continue;
        }
        let mut pick: Vec<usize> = (0..size).collect();
        loop {
            let chosen = pick.iter().fold(0u32, |m, &p| m | (1 << pool[p]));
            if pick.iter().all(|&p| (masks[pool[p]] | (1 << pool[p])) & chosen == chosen) {
                let clique = pick.iter().map(|&p| g.id_at(pool[p])).collect();
                return Ok(CliqueResult::new(clique, started));
            }
            if !next_combination(&mut pick, pool.len()) {
                break;
            }
        }
    }
    unreachable!("a single vertex is always a clique")
}

/// Advances `pick` to the next k-combination of `0..n` in lexicographic order.
fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let k = pick.len();
    let Some(i) = (0..k).rev().find(|&i| pick[i] < n - k + i) else {
        return false;
    };
    pick[i] += 1;
    for j in i + 1..k {
        pick[j] = pick[j - 1] + 1;
    }
    true
}
