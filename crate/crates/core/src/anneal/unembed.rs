use rand::Rng;

use super::embedding::Embedding;
use super::hardware::QubitId;

/// Majority value of one chain's spins and whether the chain is broken.
/// An exact tie is settled by a fair coin.
pub(crate) fn vote<R: Rng + ?Sized>(spins: impl Iterator<Item = i8>, rng: &mut R) -> (i8, bool) {
    let (mut up, mut down) = (0usize, 0usize);
    for s in spins {
        if s > 0 {
            up += 1;
        } else {
            down += 1;
        }
    }
    let broken = up > 0 && down > 0;
    let value = match up.cmp(&down) {
        std::cmp::Ordering::Greater => 1,
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => {
            if rng.gen::<bool>() {
                1
            } else {
                -1
            }
        }
    };
    (value, broken)
}

/// Decodes one embedding: logical spin of each slot (in chain order) and the
/// number of broken chains.
pub fn unembed_majority_vote<R: Rng + ?Sized>(
    spin_of: impl Fn(QubitId) -> i8,
    embedding: &Embedding,
    rng: &mut R,
) -> (Vec<i8>, usize) {
    let mut broken = 0;
    let logical = embedding
        .chains
        .iter()
        .map(|chain| {
            let (value, b) = vote(chain.qubits.iter().map(|&q| spin_of(q)), rng);
            broken += usize::from(b);
            value
        })
        .collect();
    (logical, broken)
}

/// Same as [`unembed_majority_vote`] over chains given as indices into `spins`.
pub(crate) fn decode_chains<R: Rng + ?Sized>(spins: &[i8], chains: &[Vec<usize>], rng: &mut R) -> (Vec<i8>, usize) {
    let mut broken = 0;
    let logical = chains
        .iter()
        .map(|chain| {
            let (value, b) = vote(chain.iter().map(|&q| spins[q]), rng);
            broken += usize::from(b);
            value
        })
        .collect();
    (logical, broken)
}
