use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type QubitId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Chimera,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topology {
    pub family: Family,
    /// Grid side length in unit cells.
    pub m: usize,
}

/// Which half of a K4,4 unit cell a qubit sits in. Left qubits couple to the
/// cells above and below, right qubits to the cells left and right.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left = 0,
    Right = 1,
}

/// Qubit connectivity graph of an annealer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardwareGraph {
    topology: Topology,
    adj: Vec<Vec<QubitId>>,
    coupler_count: usize,
}

/// `m x m` grid of K4,4 cells: 8m² qubits and 16m² + 8m(m-1) couplers.
pub fn build_chimera(m: usize) -> Result<HardwareGraph> {
    if m == 0 {
        return Err(Error::InvalidGrid);
    }
    let mut hw = HardwareGraph {
        topology: Topology { family: Family::Chimera, m },
        adj: vec![Vec::new(); 8 * m * m],
        coupler_count: 0,
    };
    for row in 0..m {
        for col in 0..m {
            for a in 0..4 {
                for b in 0..4 {
                    hw.couple(hw.qubit(row, col, Side::Left, a), hw.qubit(row, col, Side::Right, b));
                }
                if row + 1 < m {
                    hw.couple(hw.qubit(row, col, Side::Left, a), hw.qubit(row + 1, col, Side::Left, a));
                }
                if col + 1 < m {
                    hw.couple(hw.qubit(row, col, Side::Right, a), hw.qubit(row, col + 1, Side::Right, a));
                }
            }
        }
    }
    for list in &mut hw.adj {
        list.sort_unstable();
    }
    Ok(hw)
}

impl HardwareGraph {
    fn couple(&mut self, a: QubitId, b: QubitId) {
        self.adj[a as usize].push(b);
        self.adj[b as usize].push(a);
        self.coupler_count += 1;
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn m(&self) -> usize {
        self.topology.m
    }

    pub fn qubit(&self, row: usize, col: usize, side: Side, k: usize) -> QubitId {
        debug_assert!(row < self.m() && col < self.m() && k < 4);
        (((row * self.m() + col) * 2 + side as usize) * 4 + k) as QubitId
    }

    pub fn qubit_count(&self) -> usize {
        self.adj.len()
    }

    pub fn coupler_count(&self) -> usize {
        self.coupler_count
    }

    pub fn qubits(&self) -> impl Iterator<Item = QubitId> {
        0..self.adj.len() as QubitId
    }

    /// Couplers as `(a, b)` with `a < b`.
    pub fn couplers(&self) -> impl Iterator<Item = (QubitId, QubitId)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, list)| list.iter().filter(move |&&b| b as usize > a).map(move |&b| (a as QubitId, b)))
    }

    pub fn neighbors(&self, q: QubitId) -> &[QubitId] {
        &self.adj[q as usize]
    }

    pub fn has_coupler(&self, a: QubitId, b: QubitId) -> bool {
        self.adj.get(a as usize).is_some_and(|list| list.binary_search(&b).is_ok())
    }
}
