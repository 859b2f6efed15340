//! Clique minor-embeddings on Chimera and disjoint parallel layouts.
//!
//! On a `c x c` block the triangle construction gives a K_{4c} minor: the
//! chain of variable `4b + k` is the left qubit `k` of cells `(0..=b, b)`
//! followed by the right qubit `k` of cells `(b, b..c)`, meeting inside cell
//! `(b, b)`. Every chain has `c + 1` qubits and every two chains meet in some
//! cell, where a left and a right qubit are always coupled.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::hardware::{HardwareGraph, QubitId, Side};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain {
    /// Logical slot this chain represents.
    pub logical: usize,
    pub qubits: Vec<QubitId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub chains: Vec<Chain>,
}

impl Embedding {
    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    pub fn qubit_count(&self) -> usize {
        self.chains.iter().map(|c| c.qubits.len()).sum()
    }

    pub fn qubits(&self) -> impl Iterator<Item = QubitId> + '_ {
        self.chains.iter().flat_map(|c| c.qubits.iter().copied())
    }

    /// Checks that chains are non-empty, connected in `hw` and pairwise
    /// disjoint, and (when `clique`) that every pair of chains is joined by
    /// at least one coupler.
    pub fn validate(&self, hw: &HardwareGraph, clique: bool) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidEmbedding(msg));
        let mut owner: HashMap<QubitId, usize> = HashMap::new();
        for (i, chain) in self.chains.iter().enumerate() {
            if chain.logical != i {
                return invalid(format!("chain {i} is labelled {}", chain.logical));
            }
            if chain.qubits.is_empty() {
                return invalid(format!("chain {i} is empty"));
            }
            for &q in &chain.qubits {
                if q as usize >= hw.qubit_count() {
                    return invalid(format!("qubit {q} is not on the hardware"));
                }
                if let Some(other) = owner.insert(q, i) {
                    return invalid(format!("qubit {q} is shared by chains {other} and {i}"));
                }
            }
            if !chain_connected(hw, &chain.qubits) {
                return invalid(format!("chain {i} is not connected"));
            }
        }
        if clique {
            let n = self.chains.len();
            let mut joined = vec![false; n * n];
            for (i, chain) in self.chains.iter().enumerate() {
                for &q in &chain.qubits {
                    for p in hw.neighbors(q) {
                        if let Some(&j) = owner.get(p) {
                            joined[i * n + j] = true;
                        }
                    }
                }
            }
            for i in 0..n {
                for j in i + 1..n {
                    if !joined[i * n + j] {
                        return invalid(format!("chains {i} and {j} share no coupler"));
                    }
                }
            }
        }
        Ok(())
    }
}

fn chain_connected(hw: &HardwareGraph, qubits: &[QubitId]) -> bool {
    let members: HashSet<QubitId> = qubits.iter().copied().collect();
    let mut seen = HashSet::from([qubits[0]]);
    let mut stack = vec![qubits[0]];
    while let Some(q) = stack.pop() {
        for &p in hw.neighbors(q) {
            if members.contains(&p) && seen.insert(p) {
                stack.push(p);
            }
        }
    }
    seen.len() == members.len()
}

/// Embedding of K_n on the `c x c` block whose top-left cell is `origin`
/// (row, column). Validated exhaustively before it is returned.
pub fn clique_embedding(hw: &HardwareGraph, origin: (usize, usize), c: usize, n: usize) -> Result<Embedding> {
    let (row0, col0) = origin;
    if c == 0 || row0 + c > hw.m() || col0 + c > hw.m() {
        return Err(Error::OutOfBounds { row: row0, col: col0, size: c, m: hw.m() });
    }
    if n > 4 * c {
        return Err(Error::EmbeddingTooLarge { n, capacity: 4 * c });
    }
    let chains = (0..n)
        .map(|i| {
            let (b, k) = (i / 4, i % 4);
            let vertical = (0..=b).map(|r| hw.qubit(row0 + r, col0 + b, Side::Left, k));
            let horizontal = (b..c).map(|j| hw.qubit(row0 + b, col0 + j, Side::Right, k));
            Chain { logical: i, qubits: vertical.chain(horizontal).collect() }
        })
        .collect();
    let embedding = Embedding { chains };
    embedding.validate(hw, true)?;
    Ok(embedding)
}

/// Mutually disjoint embeddings of the same logical clique.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParallelLayout {
    /// Logical clique size each embedding supports.
    pub clique_size: usize,
    /// Side length of the cell block used per embedding.
    pub block: usize,
    pub embeddings: Vec<Embedding>,
}

impl ParallelLayout {
    pub fn replicas(&self) -> usize {
        self.embeddings.len()
    }

    pub fn qubit_count(&self) -> usize {
        self.embeddings.iter().map(Embedding::qubit_count).sum()
    }

    /// Validates each embedding and their pairwise disjointness.
    pub fn validate(&self, hw: &HardwareGraph) -> Result<()> {
        let mut used = HashSet::new();
        for (r, e) in self.embeddings.iter().enumerate() {
            if e.len() != self.clique_size {
                return Err(Error::InvalidEmbedding(format!("embedding {r} has {} chains", e.len())));
            }
            e.validate(hw, true)?;
            for q in e.qubits() {
                if !used.insert(q) {
                    return Err(Error::InvalidEmbedding(format!("qubit {q} is used by two embeddings")));
                }
            }
        }
        Ok(())
    }

    /// Layout holding only the first block of `pack_parallel_embeddings`.
    pub fn single(hw: &HardwareGraph, n: usize) -> Result<Self> {
        let c = block_size(hw, n)?;
        Ok(ParallelLayout { clique_size: n, block: c, embeddings: vec![clique_embedding(hw, (0, 0), c, n)?] })
    }
}

fn block_size(hw: &HardwareGraph, n: usize) -> Result<usize> {
    if n == 0 || n > 4 * hw.m() {
        return Err(Error::EmbeddingTooLarge { n, capacity: 4 * hw.m() });
    }
    Ok(n.div_ceil(4))
}

/// Tiles the grid with disjoint `c x c` blocks, `c = ceil(n / 4)`, and embeds
/// K_n in each: `floor(m / c)²` replicas in row-major block order.
pub fn pack_parallel_embeddings(hw: &HardwareGraph, n: usize) -> Result<ParallelLayout> {
    let c = block_size(hw, n)?;
    let per_side = hw.m() / c;
    let mut embeddings = Vec::with_capacity(per_side * per_side);
    for br in 0..per_side {
        for bc in 0..per_side {
            embeddings.push(clique_embedding(hw, (br * c, bc * c), c, n)?);
        }
    }
    let layout = ParallelLayout { clique_size: n, block: c, embeddings };
    layout.validate(hw)?;
    Ok(layout)
}
