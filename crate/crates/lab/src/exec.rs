//! Deterministic parallel execution: every task draws from a substream
//! keyed by its index alone, and results come back in index order, so the
//! collected vector is identical for any worker count.

use rayon::prelude::*;
use sinai_core::RandomStream;

pub fn parallel_map<T, F>(workers: usize, tasks: u64, stream: &RandomStream, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, RandomStream) -> T + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("worker pool");
    pool.install(|| {
        (0..tasks)
            .into_par_iter()
            .map(|i| f(i, stream.substream(i)))
            .collect()
    })
}
