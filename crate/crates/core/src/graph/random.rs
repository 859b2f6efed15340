use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Graph, VertexId};
use crate::error::{Error, Result};

/// Connectivity retries before `generate_er` gives up.
pub const MAX_CONNECT_ATTEMPTS: u32 = 1000;

/// Erdős–Rényi `G(n, p)` graph on ids `0..n`.
///
/// Pairs `(i, j)` with `i < j` are visited in lexicographic order and each is
/// kept when a uniform draw from a `ChaCha8Rng` seeded with `seed` falls below
/// `density`. With `require_connected`, seeds `seed, seed + 1, ...` are tried
/// until a connected graph appears. Returns the graph and the seed that
/// produced it.
pub fn generate_er(n: usize, density: f64, seed: u64, require_connected: bool) -> Result<(Graph, u64)> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidDensity(density));
    }
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    for attempt in 0..MAX_CONNECT_ATTEMPTS {
        let s = seed.wrapping_add(attempt as u64);
        let g = sample(n, density, s);
        if !require_connected || is_connected(&g) {
            return Ok((g, s));
        }
    }
    Err(Error::SeedsExhausted { seed, attempts: MAX_CONNECT_ATTEMPTS })
}

fn sample(n: usize, density: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n as VertexId {
        for j in i + 1..n as VertexId {
            if rng.gen::<f64>() < density {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(0..n as VertexId, edges).expect("generated edges are valid")
}

pub(crate) fn is_connected(g: &Graph) -> bool {
    let n = g.vertex_count();
    if n <= 1 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(i) = stack.pop() {
        for &j in g.local_adj(i) {
            if !seen[j] {
                seen[j] = true;
                count += 1;
                stack.push(j);
            }
        }
    }
    count == n
}
