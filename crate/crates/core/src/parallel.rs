//! Thread-pool plumbing shared by the engines.

use rayon::prelude::*;

/// Runs `f` on a dedicated pool of `threads` workers, or inline for one.
pub(crate) fn run<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    if threads <= 1 {
        return f();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
        .install(f)
}

/// Maps `0..tasks` in parallel and folds the results with `merge`.
///
/// # Panics
///
/// If `tasks == 0`.
pub(crate) fn map_reduce<T: Send>(
    threads: usize,
    tasks: usize,
    map: impl Fn(usize) -> T + Sync + Send,
    merge: impl Fn(T, T) -> T + Sync + Send,
) -> T {
    run(threads, || {
        (0..tasks)
            .into_par_iter()
            .map(map)
            .reduce_with(merge)
            .expect("at least one task")
    })
}

/// Branch depth below which recursive engines fork, for a given worker count.
pub(crate) fn split_depth(threads: usize) -> usize {
    if threads <= 1 {
        0
    } else {
        (usize::BITS - (threads - 1).leading_zeros()) as usize + 3
    }
}
