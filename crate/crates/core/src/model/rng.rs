// SPDX-License-Identifier: MIT OR Apache-2.0

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Identifies one replication of one experiment cell.
///
/// Every replication owns its own stream, so a cell can be re-run alone and the
/// result does not depend on which worker executed it or in which order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StreamKey {
    pub master_seed: u64,
    pub n: u64,
    pub truth: u64,
    pub replication: u64,
}

impl StreamKey {
    pub fn new(master_seed: u64, n: usize, truth: usize, replication: usize) -> Self {
        StreamKey {
            master_seed,
            n: n as u64,
            truth: truth as u64,
            replication: replication as u64,
        }
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-based random stream: ChaCha8 keyed by a seed, with a 64-bit stream id.
///
/// Identical `(seed, stream)` pairs yield identical sequences on every host.
#[derive(Clone, Debug)]
pub struct SimRng {
    inner: ChaCha8Rng,
}

impl SimRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        SimRng { inner }
    }

    /// Stream for one experiment replication. The key fields other than the
    /// replication index select the ChaCha key; the replication index selects
    /// the ChaCha stream.
    pub fn for_key(key: StreamKey) -> Self {
        let mut state = key.master_seed;
        let mut seed = [0u8; 32];
        let words = [
            splitmix64(&mut state) ^ key.n.wrapping_mul(0xD6E8_FEB8_6659_FD93),
            splitmix64(&mut state) ^ key.truth.wrapping_mul(0xA076_1D64_78BD_642F),
            splitmix64(&mut state),
            splitmix64(&mut state),
        ];
        for (chunk, w) in seed.chunks_exact_mut(8).zip(words) {
            // second round so n and truth diffuse through every word
            let mut s = w;
            let mixed = splitmix64(&mut s) ^ w.rotate_left(17);
            chunk.copy_from_slice(&mixed.to_le_bytes());
        }
        let mut inner = ChaCha8Rng::from_seed(seed);
        inner.set_stream(key.replication);
        SimRng { inner }
    }
}

impl RngCore for SimRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
