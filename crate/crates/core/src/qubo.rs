//! Maximum-clique QUBO, energy evaluation, spin conversion, and turning raw
//! sampler assignments into valid cliques.
//!
//! The clique QUBO on `G = (V, E)` is
//!
//! ```text
//! H(x) = -A * sum_{v in V} x_v + B * sum_{(u,v) not in E} x_u x_v,   0 < A < B
//! ```
//!
//! whose minimizers are exactly the maximum cliques, at energy `-A * omega(G)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bounds::grow_clique;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, VertexSet};

pub const DEFAULT_A: f64 = 1.0;
pub const DEFAULT_B: f64 = 2.0;

/// Binary assignment `x_v ∈ {0, 1}`.
pub type Assignment = BTreeMap<VertexId, u8>;
/// Spin assignment `s_v ∈ {-1, +1}`.
pub type SpinAssignment = BTreeMap<VertexId, i8>;

/// Sparse QUBO; quadratic keys are stored with `u < v`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Qubo {
    pub linear: BTreeMap<VertexId, f64>,
    pub quadratic: BTreeMap<(VertexId, VertexId), f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Ising {
    pub linear: BTreeMap<VertexId, f64>,
    pub quadratic: BTreeMap<(VertexId, VertexId), f64>,
    pub offset: f64,
}

fn ordered(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

fn variables_of<'a>(
    linear: &'a BTreeMap<VertexId, f64>,
    quadratic: &'a BTreeMap<(VertexId, VertexId), f64>,
) -> Vec<VertexId> {
    let mut vars: VertexSet = linear.keys().copied().collect();
    for &(u, v) in quadratic.keys() {
        vars.insert(u);
        vars.insert(v);
    }
    vars.into_iter().collect()
}

impl Qubo {
    pub fn add_linear(&mut self, v: VertexId, coeff: f64) {
        *self.linear.entry(v).or_default() += coeff;
    }

    pub fn add_quadratic(&mut self, u: VertexId, v: VertexId, coeff: f64) {
        assert_ne!(u, v, "quadratic terms need distinct variables");
        *self.quadratic.entry(ordered(u, v)).or_default() += coeff;
    }

    /// All variables mentioned by any term, ascending.
    pub fn variables(&self) -> Vec<VertexId> {
        variables_of(&self.linear, &self.quadratic)
    }

    pub fn energy(&self, x: &Assignment) -> Result<f64> {
        let value = |v: VertexId| x.get(&v).map(|&b| b as f64).ok_or(Error::MissingVariable(v));
        let mut e = 0.0;
        for (&v, &a) in &self.linear {
            e += a * value(v)?;
        }
        for (&(u, v), &a) in &self.quadratic {
            e += a * value(u)? * value(v)?;
        }
        Ok(e)
    }

    /// Substitutes `x = (s + 1) / 2`.
    pub fn to_ising(&self) -> Ising {
        let mut ising = Ising::default();
        for (&v, &a) in &self.linear {
            *ising.linear.entry(v).or_default() += a / 2.0;
            ising.offset += a / 2.0;
        }
        for (&(u, v), &a) in &self.quadratic {
            ising.quadratic.insert((u, v), a / 4.0);
            *ising.linear.entry(u).or_default() += a / 4.0;
            *ising.linear.entry(v).or_default() += a / 4.0;
            ising.offset += a / 4.0;
        }
        ising
    }

    pub fn to_json(&self) -> QuboJson {
        QuboJson {
            linear: self.linear.iter().map(|(v, &a)| (v.to_string(), a)).collect(),
            quadratic: self.quadratic.iter().map(|(&(u, v), &a)| (u, v, a)).collect(),
        }
    }
}

/// JSON debugging form: `{"linear": {id: coeff}, "quadratic": [[u, v, coeff], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuboJson {
    pub linear: BTreeMap<String, f64>,
    pub quadratic: Vec<(VertexId, VertexId, f64)>,
}

impl Ising {
    pub fn variables(&self) -> Vec<VertexId> {
        variables_of(&self.linear, &self.quadratic)
    }

    /// `sum h_i s_i + sum J_ij s_i s_j`, excluding `offset`.
    pub fn energy(&self, s: &SpinAssignment) -> Result<f64> {
        let value = |v: VertexId| s.get(&v).map(|&b| b as f64).ok_or(Error::MissingVariable(v));
        let mut e = 0.0;
        for (&v, &h) in &self.linear {
            e += h * value(v)?;
        }
        for (&(u, v), &j) in &self.quadratic {
            e += j * value(u)? * value(v)?;
        }
        Ok(e)
    }
}

pub fn qubo_to_ising(q: &Qubo) -> Ising {
    q.to_ising()
}

pub fn spins_from_bits(x: &Assignment) -> SpinAssignment {
    x.iter().map(|(&v, &b)| (v, if b == 1 { 1 } else { -1 })).collect()
}

pub fn bits_from_spins(s: &SpinAssignment) -> Assignment {
    s.iter().map(|(&v, &b)| (v, u8::from(b > 0))).collect()
}

/// Clique QUBO: `-A` on every vertex and `+B` on every non-edge.
pub fn build_mc_qubo(g: &Graph, a: f64, b: f64) -> Result<Qubo> {
    if !(a > 0.0 && b > 0.0 && a < b) {
        return Err(Error::InvalidPenalty { a, b });
    }
    let mut q = Qubo::default();
    for &v in g.vertices() {
        q.linear.insert(v, -a);
    }
    for (u, v) in g.complement().edges() {
        q.quadratic.insert((u, v), b);
    }
    Ok(q)
}

/// Repairs the support of `x` into a clique of `g` and extends it greedily.
///
/// While the support is not a clique, the vertex with the most non-neighbors
/// inside it is dropped (smallest id on ties). The result is then grown with
/// vertices adjacent to all of it, highest degree first. Variables not in `g`
/// are ignored.
pub fn extract_clique(g: &Graph, x: &Assignment) -> VertexSet {
    let mut support: Vec<usize> = x.iter().filter(|&(_, &b)| b == 1).filter_map(|(&v, _)| g.index_of(v)).collect();
    support.sort_unstable();
    let adjacent = |i: usize, j: usize| g.local_adj(i).binary_search(&j).is_ok();
    loop {
        let missing: Vec<usize> =
            support.iter().map(|&i| support.iter().filter(|&&j| j != i && !adjacent(i, j)).count()).collect();
        let worst = missing.iter().copied().max().unwrap_or(0);
        if worst == 0 {
            break;
        }
        let pos = missing.iter().position(|&m| m == worst).unwrap();
        support.remove(pos);
    }
    grow_clique(g, support.into_iter().map(|i| g.id_at(i)).collect())
}
