//! Emulated annealing backend: Chimera hardware, clique embeddings, physical
//! Ising construction, simulated annealing and majority-vote decoding.

mod embedding;
mod hardware;
mod physical;
mod sampler;
mod solve;
mod unembed;

pub use embedding::{clique_embedding, pack_parallel_embeddings, Chain, Embedding, ParallelLayout};
pub use hardware::{build_chimera, Family, HardwareGraph, QubitId, Side, Topology};
pub use physical::{
    chain_strength_utc, embed_ising, CouplerKind, PhysicalCoupler, PhysicalIsing, Replica, DEFAULT_PREFACTOR,
};
pub use sampler::{
    sa_sample, EmulatedTiming, PhysicalSampleSet, SaSchedule, ANNEAL_TIME, PROGRAMMING_TIME, READ_OVERHEAD,
    UNEMBED_TIME_PER_QUBIT,
};
pub use solve::{parallel_solve, AnnealSettings, AnnealSubsolver, ReadOutcome, SampleSet};
pub use unembed::unembed_majority_vote;
