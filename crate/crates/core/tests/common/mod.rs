//! Independent bitmask oracles and input generators for the integration tests.
#![allow(dead_code)]

use dbk_core::{Graph, VertexSet};
use proptest::prelude::*;

/// Adjacency of `g` as bitmasks over vertex positions (ids must be `0..n`).
pub fn masks(g: &Graph) -> Vec<u32> {
    let n = g.vertex_count();
    assert!(n <= 32);
    let mut m = vec![0u32; n];
    for (u, v) in g.edges() {
        m[u as usize] |= 1 << v;
        m[v as usize] |= 1 << u;
    }
    m
}

/// Every clique of `g` (including the empty one) as a bitmask.
pub fn all_cliques(g: &Graph) -> Vec<u32> {
    fn extend(adj: &[u32], clique: u32, candidates: u32, out: &mut Vec<u32>) {
        out.push(clique);
        let mut rest = candidates;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            extend(adj, clique | 1 << v, rest & adj[v as usize], out);
        }
    }
    let adj = masks(g);
    let all = if g.vertex_count() == 32 { u32::MAX } else { (1u32 << g.vertex_count()) - 1 };
    let mut out = Vec::new();
    extend(&adj, 0, all, &mut out);
    out
}

/// Clique number by plain branch and bound on bitmasks.
pub fn omega(g: &Graph) -> usize {
    fn search(adj: &[u32], size: usize, candidates: u32, best: &mut usize) {
        if candidates == 0 {
            *best = (*best).max(size);
            return;
        }
        let mut rest = candidates;
        while rest != 0 {
            if size + rest.count_ones() as usize <= *best {
                return;
            }
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            search(adj, size + 1, rest & adj[v as usize], best);
        }
    }
    let adj = masks(g);
    let mut best = 0;
    let n = g.vertex_count();
    let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    search(&adj, 0, all, &mut best);
    best
}

pub fn to_set(mask: u32) -> VertexSet {
    (0..32).filter(|v| mask >> v & 1 == 1).collect()
}

pub fn is_clique_mask(g: &Graph, mask: u32) -> bool {
    let adj = masks(g);
    (0..g.vertex_count()).filter(|&v| mask >> v & 1 == 1).all(|v| (adj[v] | 1 << v) & mask == mask)
}

pub fn graph_from_bits(n: usize, bits: &[bool]) -> Graph {
    let mut edges = Vec::new();
    let mut it = bits.iter();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if *it.next().unwrap() {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(0..n as u32, edges).unwrap()
}

/// Graphs on `lo..=hi` vertices with an edge probability drawn per graph.
pub fn arb_graph(lo: usize, hi: usize) -> impl Strategy<Value = Graph> {
    (lo..=hi, 0.05f64..0.95).prop_flat_map(|(n, p)| {
        prop::collection::vec(prop::bool::weighted(p), n * n.saturating_sub(1) / 2)
            .prop_map(move |bits| graph_from_bits(n, &bits))
    })
}
