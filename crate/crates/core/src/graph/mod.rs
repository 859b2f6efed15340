//! Undirected simple graphs with stable vertex identities.
//!
//! Every derived graph (induced subgraph, vertex removal, k-core) keeps the
//! original vertex ids, so a clique found deep inside a decomposition can be
//! reported in the coordinates of the input graph.

mod io;
mod random;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

pub use io::{read_graph, write_graph, GraphJson};
pub use random::{generate_er, MAX_CONNECT_ATTEMPTS};

pub type VertexId = u32;
pub type VertexSet = BTreeSet<VertexId>;

/// Immutable undirected simple graph.
///
/// Vertices are kept sorted by id; adjacency lists hold local indices into
/// that sorted order.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Graph {
    ids: Vec<VertexId>,
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from a vertex list and an edge list. Duplicate edges
    /// (in either orientation) are merged.
    pub fn from_edges<V, E>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator<Item = VertexId>,
        E: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let ids: Vec<VertexId> = vertices.into_iter().collect::<VertexSet>().into_iter().collect();
        let mut adj = vec![Vec::new(); ids.len()];
        for (u, v) in edges {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            let iu = ids.binary_search(&u).map_err(|_| Error::UnknownVertex(u))?;
            let iv = ids.binary_search(&v).map_err(|_| Error::UnknownVertex(v))?;
            adj[iu].push(iv);
            adj[iv].push(iu);
        }
        let mut edge_count = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Ok(Graph { ids, adj, edge_count: edge_count / 2 })
    }

    /// `n` isolated vertices with ids `0..n`.
    pub fn empty(n: usize) -> Self {
        Graph { ids: (0..n as VertexId).collect(), adj: vec![Vec::new(); n], edge_count: 0 }
    }

    /// Complete graph on ids `0..n`.
    pub fn complete(n: usize) -> Self {
        let adj = (0..n).map(|i| (0..n).filter(|&j| j != i).collect()).collect();
        Graph { ids: (0..n as VertexId).collect(), adj, edge_count: n * n.saturating_sub(1) / 2 }
    }

    /// Cycle `0-1-...-(n-1)-0`; requires `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        let n32 = n as VertexId;
        Graph::from_edges(0..n32, (0..n32).map(|i| (i, (i + 1) % n32))).expect("valid cycle")
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Vertex ids in ascending order.
    pub fn vertices(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.ids.iter().copied().collect()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.index_of(v).is_some()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(move |(i, list)| list.iter().filter(move |&&j| j > i).map(move |&j| (self.ids[i], self.ids[j])))
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Some(iu), Some(iv)) => self.adj[iu].binary_search(&iv).is_ok(),
            _ => false,
        }
    }

    pub fn degree(&self, v: VertexId) -> Result<usize> {
        self.index_of(v).map(|i| self.adj[i].len()).ok_or(Error::UnknownVertex(v))
    }

    pub fn neighbors(&self, v: VertexId) -> Result<impl Iterator<Item = VertexId> + '_> {
        let i = self.index_of(v).ok_or(Error::UnknownVertex(v))?;
        Ok(self.adj[i].iter().map(move |&j| self.ids[j]))
    }

    /// Edge density `2|E| / (n(n-1))`; zero below two vertices.
    pub fn density(&self) -> f64 {
        let n = self.ids.len();
        if n < 2 {
            0.0
        } else {
            2.0 * self.edge_count as f64 / (n * (n - 1)) as f64
        }
    }

    pub fn is_complete(&self) -> bool {
        let n = self.ids.len();
        self.edge_count == n * n.saturating_sub(1) / 2
    }

    /// Graph on the same vertices whose edges are exactly the non-edges of `self`.
    pub fn complement(&self) -> Graph {
        let n = self.ids.len();
        let mut adj = Vec::with_capacity(n);
        for (i, list) in self.adj.iter().enumerate() {
            let mut out = Vec::with_capacity(n - 1 - list.len());
            let mut it = list.iter().peekable();
            for j in 0..n {
                if it.peek() == Some(&&j) {
                    it.next();
                } else if j != i {
                    out.push(j);
                }
            }
            adj.push(out);
        }
        let total = n * n.saturating_sub(1) / 2;
        Graph { ids: self.ids.clone(), adj, edge_count: total - self.edge_count }
    }

    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<Graph> {
        let idx = s.iter().map(|&v| self.index_of(v).ok_or(Error::UnknownVertex(v))).collect::<Result<Vec<_>>>()?;
        Ok(self.induced_by_indices(&idx))
    }

    pub fn remove_vertex(&self, v: VertexId) -> Result<Graph> {
        let skip = self.index_of(v).ok_or(Error::UnknownVertex(v))?;
        let keep: Vec<usize> = (0..self.ids.len()).filter(|&i| i != skip).collect();
        Ok(self.induced_by_indices(&keep))
    }

    /// A vertex of minimum degree, smallest id among ties.
    pub fn lowest_degree_vertex(&self) -> Result<VertexId> {
        // ids are sorted, so min_by_key keeps the first (smallest) id on ties
        (0..self.ids.len()).min_by_key(|&i| self.adj[i].len()).map(|i| self.ids[i]).ok_or(Error::EmptyGraph)
    }

    /// Whether every distinct pair of `s` is adjacent.
    pub fn is_clique(&self, s: &VertexSet) -> Result<bool> {
        let idx = s.iter().map(|&v| self.index_of(v).ok_or(Error::UnknownVertex(v))).collect::<Result<Vec<_>>>()?;
        Ok(idx.iter().enumerate().all(|(a, &i)| idx[a + 1..].iter().all(|j| self.adj[i].binary_search(j).is_ok())))
    }

    pub(crate) fn index_of(&self, v: VertexId) -> Option<usize> {
        self.ids.binary_search(&v).ok()
    }

    pub(crate) fn id_at(&self, i: usize) -> VertexId {
        self.ids[i]
    }

    pub(crate) fn local_adj(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    /// Subgraph induced by the given local indices, which must be ascending.
    pub(crate) fn induced_by_indices(&self, keep: &[usize]) -> Graph {
        debug_assert!(keep.windows(2).all(|w| w[0] < w[1]));
        let mut remap = vec![usize::MAX; self.ids.len()];
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new;
        }
        let mut edge_count = 0;
        let adj: Vec<Vec<usize>> = keep
            .iter()
            .map(|&old| {
                let list: Vec<usize> =
                    self.adj[old].iter().filter_map(|&j| (remap[j] != usize::MAX).then_some(remap[j])).collect();
                edge_count += list.len();
                list
            })
            .collect();
        Graph { ids: keep.iter().map(|&i| self.ids[i]).collect(), adj, edge_count: edge_count / 2 }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph").field("vertices", &self.ids).field("edges", &self.edges().collect::<Vec<_>>()).finish()
    }
}
