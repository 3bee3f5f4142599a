//! Keyed, order-independent random streams.
//!
//! Every random draw in the crate is addressed by a key rather than by the
//! order in which it happens to be requested. A key is hashed into a ChaCha8
//! key and the draw's position inside the stream is fixed by the remaining
//! coordinates, so the value of a draw never depends on traversal order or on
//! how work is split across threads.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Child seed for `index` under `parent` (repetitions, paths, sweep points).
pub fn derive_seed(parent: u64, index: u64) -> u64 {
    mix64(mix64(parent ^ 0x5157_4c44_5249_4654).wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}

fn chacha_from(tag: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    let mut state = tag;
    for chunk in key.chunks_exact_mut(8) {
        state = state.wrapping_add(GOLDEN);
        chunk.copy_from_slice(&mix64(state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Sequential uniform/normal source built on a keyed ChaCha8 stream.
///
/// Normals use Box–Muller so each normal pair consumes exactly two words;
/// this keeps the consumption per draw fixed, which [`ModeStream`] relies on.
#[derive(Clone, Debug)]
pub struct Stream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl Stream {
    pub fn new(seed: u64) -> Self {
        Self { rng: chacha_from(mix64(seed ^ 0x7374_7265_616d)), spare: None }
    }

    /// Uniform on [0, 1).
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on (0, 1].
    #[inline]
    pub fn uniform_open0(&mut self) -> f64 {
        1.0 - self.uniform()
    }

    pub fn normal_pair(&mut self) -> (f64, f64) {
        let r = (-2.0 * self.uniform_open0().ln()).sqrt();
        let theta = std::f64::consts::TAU * self.uniform();
        let (s, c) = theta.sin_cos();
        (r * c, r * s)
    }

    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let (a, b) = self.normal_pair();
        self.spare = Some(b);
        a
    }
}

/// Number of 32-bit stream words reserved for one mode draw.
pub(crate) const WORDS_PER_MODE: u128 = 16;

/// Stream for the row `n` of a mode table; mode `m` owns a fixed window of
/// [`WORDS_PER_MODE`] words.
#[derive(Clone, Debug)]
pub(crate) struct ModeStream {
    rng: ChaCha8Rng,
}

impl ModeStream {
    pub(crate) fn new(master_seed: u64, n: usize) -> Self {
        let tag = mix64(master_seed ^ 0x6d6f_6465_7461_626c).wrapping_add((n as u64).wrapping_mul(GOLDEN));
        Self { rng: chacha_from(mix64(tag)) }
    }

    /// Position the stream at the window of mode `slot` (slot = m + M_offset).
    pub(crate) fn seek(&mut self, slot: u64) {
        let pos = slot as u128 * WORDS_PER_MODE;
        let cur = self.rng.get_word_pos();
        if pos > cur && pos - cur <= 4 * WORDS_PER_MODE {
            // Short forward skips are cheaper to read through than to reseek.
            for _ in cur..pos {
                self.rng.next_u32();
            }
        } else if pos != cur {
            self.rng.set_word_pos(pos);
        }
    }

    #[inline]
    pub(crate) fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
