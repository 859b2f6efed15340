use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::embedding::ParallelLayout;
use super::hardware::{HardwareGraph, QubitId};
use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::qubo::{Ising, Qubo};

pub const DEFAULT_PREFACTOR: f64 = 0.2;

/// Chain strength from uniform torque compensation, read as
/// `prefactor * sqrt(mean(a_ij²))` over the quadratic coefficients. Without
/// quadratic terms, falls back to `prefactor * max |a_i|`.
pub fn chain_strength_utc(q: &Qubo, prefactor: f64) -> f64 {
    if q.quadratic.is_empty() {
        let max_linear = q.linear.values().fold(0.0f64, |m, a| m.max(a.abs()));
        log::debug!("no quadratic terms; chain strength from max |linear| = {max_linear}");
        return prefactor * max_linear;
    }
    let mean_sq = q.quadratic.values().map(|a| a * a).sum::<f64>() / q.quadratic.len() as f64;
    prefactor * mean_sq.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplerKind {
    /// Carries part of a logical coupling.
    Problem,
    /// Ferromagnetic coupling inside a chain.
    Chain,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalCoupler {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
    pub kind: CouplerKind,
}

/// One copy of the logical problem inside a physical Ising.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Replica {
    /// Chain of each logical slot as indices into `PhysicalIsing::qubits`.
    pub chains: Vec<Vec<usize>>,
}

/// Embedded Ising problem over a compact qubit index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalIsing {
    /// Hardware id of each compact index.
    pub qubits: Vec<QubitId>,
    pub h: Vec<f64>,
    pub couplers: Vec<PhysicalCoupler>,
    pub replicas: Vec<Replica>,
    /// Logical variable held by each slot; slots past the end are unused.
    pub variables: Vec<VertexId>,
    pub chain_strength: f64,
}

impl PhysicalIsing {
    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }

    pub fn energy(&self, spins: &[i8]) -> f64 {
        let linear: f64 = self.h.iter().zip(spins).map(|(h, &s)| h * s as f64).sum();
        let quadratic: f64 = self.couplers.iter().map(|c| c.weight * (spins[c.a] * spins[c.b]) as f64).sum();
        linear + quadratic
    }

    /// Qubit to replica index.
    pub fn replica_of(&self) -> Vec<usize> {
        let mut owner = vec![0; self.qubits.len()];
        for (r, rep) in self.replicas.iter().enumerate() {
            for &q in rep.chains.iter().flatten() {
                owner[q] = r;
            }
        }
        owner
    }

    /// Energy split into each replica's problem part (fields plus problem
    /// couplers) and the total chain-coupler part.
    pub fn energy_parts(&self, spins: &[i8]) -> (Vec<f64>, f64) {
        let owner = self.replica_of();
        let mut per_replica = vec![0.0; self.replicas.len()];
        let mut chain = 0.0;
        for (q, (&h, &s)) in self.h.iter().zip(spins).enumerate() {
            per_replica[owner[q]] += h * s as f64;
        }
        for c in &self.couplers {
            let term = c.weight * (spins[c.a] * spins[c.b]) as f64;
            match c.kind {
                CouplerKind::Chain => chain += term,
                CouplerKind::Problem => per_replica[owner[c.a]] += term,
            }
        }
        (per_replica, chain)
    }

    /// Chains (over all replicas) whose qubits disagree.
    pub fn broken_chains(&self, spins: &[i8]) -> usize {
        self.replicas
            .iter()
            .flat_map(|r| &r.chains)
            .filter(|chain| chain.iter().any(|&q| spins[q] != spins[chain[0]]))
            .count()
    }
}

/// Places one copy of `logical` on every embedding of `layout`.
///
/// Logical variables take slots in ascending id order. Each field is split
/// evenly over its chain, each logical coupling evenly over every physical
/// coupler joining the two chains, and every coupler inside a chain gets
/// `-chain_strength`. Unused slots keep zero fields.
pub fn embed_ising(
    hw: &HardwareGraph,
    logical: &Ising,
    layout: &ParallelLayout,
    chain_strength: f64,
) -> Result<PhysicalIsing> {
    let variables = logical.variables();
    if variables.len() > layout.clique_size {
        return Err(Error::EmbeddingTooLarge { n: variables.len(), capacity: layout.clique_size });
    }
    let slot: HashMap<VertexId, usize> = variables.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    let mut phys = PhysicalIsing {
        qubits: Vec::with_capacity(layout.qubit_count()),
        h: Vec::new(),
        couplers: Vec::new(),
        replicas: Vec::with_capacity(layout.replicas()),
        variables: variables.clone(),
        chain_strength,
    };
    for embedding in &layout.embeddings {
        // hardware qubit -> (compact index, slot), for this replica only
        let mut placed: HashMap<QubitId, (usize, usize)> = HashMap::with_capacity(embedding.qubit_count());
        let mut chains = Vec::with_capacity(embedding.len());
        for chain in &embedding.chains {
            let field = variables.get(chain.logical).and_then(|v| logical.linear.get(v)).copied().unwrap_or(0.0);
            let share = field / chain.qubits.len() as f64;
            let mut indices = Vec::with_capacity(chain.qubits.len());
            for &q in &chain.qubits {
                let idx = phys.qubits.len();
                phys.qubits.push(q);
                phys.h.push(share);
                placed.insert(q, (idx, chain.logical));
                indices.push(idx);
            }
            for &q in &chain.qubits {
                for &p in hw.neighbors(q) {
                    if p > q && chain.qubits.contains(&p) {
                        phys.couplers.push(PhysicalCoupler {
                            a: placed[&q].0,
                            b: placed[&p].0,
                            weight: -chain_strength,
                            kind: CouplerKind::Chain,
                        });
                    }
                }
            }
            chains.push(indices);
        }

        for (&(u, v), &j) in &logical.quadratic {
            if j == 0.0 {
                continue;
            }
            let (su, sv) = (slot[&u], slot[&v]);
            let mut joins = Vec::new();
            for &q in &embedding.chains[su].qubits {
                for p in hw.neighbors(q) {
                    if let Some(&(pi, ps)) = placed.get(p) {
                        if ps == sv {
                            joins.push((placed[&q].0, pi));
                        }
                    }
                }
            }
            if joins.is_empty() {
                return Err(Error::MissingCoupler(u, v));
            }
            let share = j / joins.len() as f64;
            for (a, b) in joins {
                phys.couplers.push(PhysicalCoupler {
                    a: a.min(b),
                    b: a.max(b),
                    weight: share,
                    kind: CouplerKind::Problem,
                });
            }
        }
        phys.replicas.push(Replica { chains });
    }
    Ok(phys)
}
