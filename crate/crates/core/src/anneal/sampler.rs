//! Seeded simulated annealing standing in for the annealer itself.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::physical::PhysicalIsing;
use crate::error::{Error, Result};

/// Synthetic timing model. Annealer time per call is
/// `reads * (ANNEAL_TIME + READ_OVERHEAD) + PROGRAMMING_TIME`; unembedding
/// time is `reads * qubits * UNEMBED_TIME_PER_QUBIT`.
pub const ANNEAL_TIME: f64 = 50e-6;
pub const READ_OVERHEAD: f64 = 150e-6;
pub const PROGRAMMING_TIME: f64 = 10e-3;
pub const UNEMBED_TIME_PER_QUBIT: f64 = 0.1e-6;

/// Uphill moves with `beta * delta` beyond this are rejected without a draw.
const MAX_EXPONENT: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmulatedTiming {
    pub t_qpu: f64,
    pub t_unembed: f64,
}

impl EmulatedTiming {
    pub fn for_call(num_reads: usize, qubits: usize) -> Self {
        EmulatedTiming {
            t_qpu: num_reads as f64 * (ANNEAL_TIME + READ_OVERHEAD) + PROGRAMMING_TIME,
            t_unembed: (num_reads * qubits) as f64 * UNEMBED_TIME_PER_QUBIT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaSchedule {
    pub num_reads: usize,
    pub sweeps: usize,
    pub beta_min: f64,
    pub beta_max: f64,
}

impl Default for SaSchedule {
    fn default() -> Self {
        SaSchedule { num_reads: 1000, sweeps: 1000, beta_min: 0.1, beta_max: 10.0 }
    }
}

impl SaSchedule {
    /// Inverse temperature for each sweep, geometric from `beta_min` to `beta_max`.
    pub fn betas(&self) -> Vec<f64> {
        if self.sweeps == 1 {
            return vec![self.beta_max];
        }
        let ratio = (self.beta_max / self.beta_min).powf(1.0 / (self.sweeps - 1) as f64);
        (0..self.sweeps).map(|t| self.beta_min * ratio.powi(t as i32)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalSampleSet {
    /// Final spin state of each read, over the compact qubit index.
    pub states: Vec<Vec<i8>>,
    pub energies: Vec<f64>,
    pub broken_chains: Vec<usize>,
    pub timing: EmulatedTiming,
}

impl PhysicalSampleSet {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// Sparse symmetric coupling matrix in compressed rows.
struct Csr {
    start: Vec<usize>,
    col: Vec<usize>,
    weight: Vec<f64>,
}

impl Csr {
    fn new(phys: &PhysicalIsing) -> Self {
        let n = phys.len();
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for c in &phys.couplers {
            rows[c.a].push((c.b, c.weight));
            rows[c.b].push((c.a, c.weight));
        }
        let mut csr = Csr { start: Vec::with_capacity(n + 1), col: Vec::new(), weight: Vec::new() };
        csr.start.push(0);
        for row in rows {
            for (j, w) in row {
                csr.col.push(j);
                csr.weight.push(w);
            }
            csr.start.push(csr.col.len());
        }
        csr
    }
}

/// Independent annealing runs of single-spin-flip Metropolis.
///
/// Read `r` draws from a `ChaCha8Rng` seeded with `seed` on stream `r`, so a
/// read's result depends only on `(phys, schedule, seed, r)`.
pub fn sa_sample(phys: &PhysicalIsing, schedule: &SaSchedule, seed: u64) -> Result<PhysicalSampleSet> {
    if schedule.num_reads == 0 || schedule.sweeps == 0 {
        return Err(Error::InvalidSamplerSettings);
    }
    let csr = Csr::new(phys);
    let betas = schedule.betas();
    let n = phys.len();
    let mut out = PhysicalSampleSet {
        states: Vec::with_capacity(schedule.num_reads),
        energies: Vec::with_capacity(schedule.num_reads),
        broken_chains: Vec::with_capacity(schedule.num_reads),
        timing: EmulatedTiming::for_call(schedule.num_reads, n),
    };
    for read in 0..schedule.num_reads {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(read as u64);
        let mut spins: Vec<i8> = (0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
        // local field h_i + sum_j J_ij s_j, kept current across flips
        let mut field: Vec<f64> = (0..n)
            .map(|i| {
                let row = csr.start[i]..csr.start[i + 1];
                phys.h[i] + row.map(|k| csr.weight[k] * spins[csr.col[k]] as f64).sum::<f64>()
            })
            .collect();
        for &beta in &betas {
            for i in 0..n {
                let delta = -2.0 * spins[i] as f64 * field[i];
                let accept = delta <= 0.0 || {
                    let x = beta * delta;
                    x < MAX_EXPONENT && rng.gen::<f64>() < (-x).exp()
                };
                if accept {
                    spins[i] = -spins[i];
                    let change = 2.0 * spins[i] as f64;
                    for k in csr.start[i]..csr.start[i + 1] {
                        field[csr.col[k]] += change * csr.weight[k];
                    }
                }
            }
        }
        out.energies.push(phys.energy(&spins));
        out.broken_chains.push(phys.broken_chains(&spins));
        out.states.push(spins);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anneal::physical::{CouplerKind, PhysicalCoupler, Replica};

    fn phys(h: Vec<f64>, couplers: Vec<(usize, usize, f64)>) -> PhysicalIsing {
        let n = h.len();
        PhysicalIsing {
            qubits: (0..n as u32).collect(),
            h,
            couplers: couplers
                .into_iter()
                .map(|(a, b, weight)| PhysicalCoupler { a, b, weight, kind: CouplerKind::Problem })
                .collect(),
            replicas: vec![Replica { chains: (0..n).map(|i| vec![i]).collect() }],
            variables: (0..n as u32).collect(),
            chain_strength: 0.0,
        }
    }

    #[test]
    fn single_spin_follows_its_field() {
        let p = phys(vec![-1.0], vec![]);
        let s = sa_sample(&p, &SaSchedule { num_reads: 50, sweeps: 10, ..Default::default() }, 1).unwrap();
        assert!(s.states.iter().all(|st| st[0] == 1));
        assert!(s.energies.iter().all(|&e| e == -1.0));
    }

    #[test]
    fn ferromagnet_aligns() {
        let p = phys(vec![0.0, 0.0], vec![(0, 1, -1.0)]);
        let s = sa_sample(&p, &SaSchedule { num_reads: 200, sweeps: 100, ..Default::default() }, 9).unwrap();
        // at beta 10 a misaligned pair survives a sweep with probability ~e^-20
        assert!(s.states.iter().all(|st| st[0] == st[1]));
        let ups = s.states.iter().filter(|st| st[0] == 1).count();
        assert!(ups > 50 && ups < 150, "both ground states should appear, got {ups} up");
    }

    #[test]
    fn seeded_runs_repeat_exactly() {
        let p = phys(vec![0.3, -0.2, 0.1], vec![(0, 1, 0.5), (1, 2, -0.7), (0, 2, 0.2)]);
        let sched = SaSchedule { num_reads: 20, sweeps: 30, ..Default::default() };
        assert_eq!(sa_sample(&p, &sched, 5).unwrap(), sa_sample(&p, &sched, 5).unwrap());
        assert_ne!(sa_sample(&p, &sched, 5).unwrap().states, sa_sample(&p, &sched, 6).unwrap().states);
    }

    #[test]
    fn rejects_empty_schedules() {
        let p = phys(vec![1.0], vec![]);
        assert!(sa_sample(&p, &SaSchedule { num_reads: 0, ..Default::default() }, 0).is_err());
        assert!(sa_sample(&p, &SaSchedule { sweeps: 0, ..Default::default() }, 0).is_err());
    }

    #[test]
    fn schedule_and_timing() {
        let b = SaSchedule { num_reads: 1, sweeps: 3, beta_min: 0.1, beta_max: 10.0 }.betas();
        assert!((b[0] - 0.1).abs() < 1e-12 && (b[1] - 1.0).abs() < 1e-12 && (b[2] - 10.0).abs() < 1e-12);
        let t = EmulatedTiming::for_call(1000, 100);
        assert!((t.t_qpu - 0.21).abs() < 1e-12);
        assert!((t.t_unembed - 0.01).abs() < 1e-12);
    }
}
