//! Data-parallel inner loops with a sequential fallback.
//!
//! The heavy loops in this crate (per-sample gradients in a minibatch, grid
//! queries, corpus synthesis, metric evaluation) are all index-parallel. They
//! go through [`map_indexed`] / [`fold_chunks`] so that a single switch picks
//! the execution strategy:
//!
//! * with the `parallel` feature (default) the work runs on rayon,
//! * without it the crate compiles with no rayon dependency at all,
//! * either build can force [`Parallelism::Sequential`] at runtime, which the
//!   bench suite uses to compare both strategies in one process.
//!
//! Reductions are deterministic: work is split into a fixed number of chunks
//! whose partial results are merged in chunk order, so f64 accumulation does
//! not depend on thread scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Execution strategy for index-parallel loops.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    #[cfg(feature = "parallel")]
    Rayon,
}

impl Default for Parallelism {
    #[cfg(feature = "parallel")]
    fn default() -> Self {
        Parallelism::Rayon
    }
    #[cfg(not(feature = "parallel"))]
    fn default() -> Self {
        Parallelism::Sequential
    }
}

/// Number of reduction chunks. Fixed (not tied to the thread count) so that
/// merge order, and therefore floating-point results, are reproducible.
pub const REDUCE_CHUNKS: usize = 8;

/// `(0..n).map(f)` collected in index order.
pub fn map_indexed<T, F>(par: Parallelism, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    match par {
        Parallelism::Sequential => (0..n).map(f).collect(),
        #[cfg(feature = "parallel")]
        Parallelism::Rayon => (0..n).into_par_iter().map(f).collect(),
    }
}

/// Fold `0..n` into `REDUCE_CHUNKS` partial accumulators and merge them in
/// chunk order. `fold` must only depend on the index it is given.
pub fn fold_chunks<A, Fi, Ff, Fm>(par: Parallelism, n: usize, init: Fi, fold: Ff, mut merge: Fm) -> Option<A>
where
    A: Send,
    Fi: Fn() -> A + Sync,
    Ff: Fn(&mut A, usize) + Sync,
    Fm: FnMut(&mut A, A),
{
    if n == 0 {
        return None;
    }
    let n_chunks = REDUCE_CHUNKS.min(n);
    let chunk_len = n.div_ceil(n_chunks);
    let ranges: Vec<(usize, usize)> = (0..n_chunks)
        .map(|c| (c * chunk_len, ((c + 1) * chunk_len).min(n)))
        .filter(|(a, b)| a < b)
        .collect();

    let run_chunk = |&(lo, hi): &(usize, usize)| {
        let mut acc = init();
        for i in lo..hi {
            fold(&mut acc, i);
        }
        acc
    };

    let partials: Vec<A> = match par {
        Parallelism::Sequential => ranges.iter().map(run_chunk).collect(),
        #[cfg(feature = "parallel")]
        Parallelism::Rayon => ranges.par_iter().map(run_chunk).collect(),
    };

    let mut it = partials.into_iter();
    let mut total = it.next()?;
    for p in it {
        merge(&mut total, p);
    }
    Some(total)
}
