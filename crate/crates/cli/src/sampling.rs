//! Deterministic parallel sampling.
//!
//! Trials are cut into chunks of [`CHUNK`]. Chunk `c` draws from ChaCha8
//! seeded with the user seed on stream `c`, so output depends only on the
//! seed and never on the thread count or scheduling.

use std::collections::BTreeMap;

use allgenus_core::chords::{sample_indecomposable, ChordDiagram};
use allgenus_core::gfengine::MapCounts;
use allgenus_core::mapcore::{sample_map, RootedMap};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub const CHUNK: u64 = 4096;

/// Environment variable holding the worker count; unset means one per core.
pub const THREADS_ENV: &str = "ALLGENUS_THREADS";

pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Runs `f` on a pool sized by [`THREADS_ENV`].
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .unwrap_or(0);
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

fn chunk_len(trials: u64, c: u64) -> u64 {
    CHUNK.min(trials - c * CHUNK)
}

fn merge<K: Ord>(mut a: BTreeMap<K, u64>, b: BTreeMap<K, u64>) -> BTreeMap<K, u64> {
    for (k, v) in b {
        *a.entry(k).or_default() += v;
    }
    a
}

/// Histogram of `key` over `trials` uniform maps with `n` edges.
/// `counts` must reach `n`.
pub fn map_histogram<K, F>(
    n: usize,
    trials: u64,
    seed: u64,
    counts: &MapCounts,
    key: F,
) -> BTreeMap<K, u64>
where
    K: Ord + Send,
    F: Fn(&RootedMap) -> K + Sync,
{
    (0..trials.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c);
            let mut h = BTreeMap::new();
            for _ in 0..chunk_len(trials, c) {
                *h.entry(key(&sample_map(n, counts, &mut rng))).or_default() += 1;
            }
            h
        })
        .reduce(BTreeMap::new, merge)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramRun {
    pub histogram: BTreeMap<u64, u64>,
    /// Diagrams drawn, accepted or not.
    pub attempts: u64,
    pub accepted: u64,
}

impl DiagramRun {
    pub fn acceptance_rate(&self) -> f64 {
        if self.attempts == 0 {
            0.0
        } else {
            self.accepted as f64 / self.attempts as f64
        }
    }
}

/// `trials` indecomposable diagrams with `n` chords by rejection.
pub fn diagram_histogram<F>(n: usize, trials: u64, seed: u64, key: F) -> DiagramRun
where
    F: Fn(&ChordDiagram) -> u64 + Sync,
{
    let (histogram, attempts) = (0..trials.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c);
            let mut h = BTreeMap::new();
            let mut attempts = 0;
            for _ in 0..chunk_len(trials, c) {
                let (d, a) = sample_indecomposable(n, &mut rng);
                attempts += a;
                *h.entry(key(&d)).or_default() += 1;
            }
            (h, attempts)
        })
        .reduce(
            || (BTreeMap::new(), 0),
            |(h1, a1), (h2, a2)| (merge(h1, h2), a1 + a2),
        );
    DiagramRun {
        histogram,
        attempts,
        accepted: trials,
    }
}

/// The maps behind [`map_histogram`] with the same arguments, in order.
pub fn map_samples(n: usize, trials: u64, seed: u64, counts: &MapCounts) -> Vec<RootedMap> {
    (0..trials.div_ceil(CHUNK))
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = chunk_rng(seed, c);
            (0..chunk_len(trials, c))
                .map(move |_| sample_map(n, counts, &mut rng))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// The diagrams behind [`diagram_histogram`] with the same arguments, in
/// order.
pub fn diagram_samples(n: usize, trials: u64, seed: u64) -> Vec<ChordDiagram> {
    (0..trials.div_ceil(CHUNK))
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = chunk_rng(seed, c);
            (0..chunk_len(trials, c))
                .map(move |_| sample_indecomposable(n, &mut rng).0)
                .collect::<Vec<_>>()
        })
        .collect()
}
