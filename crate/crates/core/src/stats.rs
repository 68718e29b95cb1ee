//! Mergeable running statistics and a deterministic parallel replicate loop.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Replicates are processed in fixed blocks of this size; blocks run in
/// parallel and are merged in block order, so results do not depend on the
/// number of worker threads.
pub const REPLICATE_BLOCK: u64 = 256;

/// Count, mean, sum of squared deviations, min and max of a sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StreamingStat {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
    pub min: f64,
    pub max: f64,
}

impl Default for StreamingStat {
    fn default() -> Self {
        StreamingStat {
            count: 0,
            mean: 0.0,
            m2: 0.0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
        }
    }
}

impl StreamingStat {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_values<I: IntoIterator<Item = f64>>(values: I) -> Self {
        let mut s = Self::new();
        values.into_iter().for_each(|x| s.push(x));
        s
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
        self.min = self.min.min(x);
        self.max = self.max.max(x);
    }

    pub fn merge(&mut self, other: &StreamingStat) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        let delta = other.mean - self.mean;
        self.mean += delta * nb / n;
        self.m2 += other.m2 + delta * delta * na * nb / n;
        self.count += other.count;
        self.min = self.min.min(other.min);
        self.max = self.max.max(other.max);
    }

    pub fn merged(mut self, other: &StreamingStat) -> Self {
        self.merge(other);
        self
    }

    /// Sample variance; `None` with fewer than two observations.
    pub fn variance(&self) -> Option<f64> {
        (self.count >= 2).then(|| (self.m2 / (self.count - 1) as f64).max(0.0))
    }

    /// Standard error of the mean; `None` with fewer than two observations.
    pub fn se(&self) -> Option<f64> {
        self.variance().map(|v| (v / self.count as f64).sqrt())
    }
}

/// Folds replicates `0..count` into an accumulator. Each block of
/// [`REPLICATE_BLOCK`] replicates is folded sequentially from `init()`,
/// blocks run on the rayon pool, and block results are merged left to right.
pub fn fold_replicates<A, I, F, M>(count: u64, init: I, fold: F, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, u64) + Sync,
    M: Fn(&mut A, A),
{
    let blocks = count.div_ceil(REPLICATE_BLOCK);
    let partials: Vec<A> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut acc = init();
            for r in b * REPLICATE_BLOCK..((b + 1) * REPLICATE_BLOCK).min(count) {
                fold(&mut acc, r);
            }
            acc
        })
        .collect();
    let mut total = init();
    for part in partials {
        merge(&mut total, part);
    }
    total
}

/// [`StreamingStat`] of `sample(r)` over replicates `0..count`.
pub fn replicate_stat<F>(count: u64, sample: F) -> StreamingStat
where
    F: Fn(u64) -> f64 + Sync,
{
    fold_replicates(
        count,
        StreamingStat::new,
        |s, r| s.push(sample(r)),
        |a, b| a.merge(&b),
    )
}
