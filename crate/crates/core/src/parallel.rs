//! Deterministic fan-out over fixed-size chunks.

use std::sync::OnceLock;

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "QCPINN_THREADS";

fn pool() -> Option<&'static rayon::ThreadPool> {
    static POOL: OnceLock<Option<rayon::ThreadPool>> = OnceLock::new();
    POOL.get_or_init(|| {
        let n = std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
            .unwrap_or_else(|| {
                std::thread::available_parallelism()
                    .map(|n| n.get())
                    .unwrap_or(1)
            });
        if n <= 1 {
            return None;
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()
    })
    .as_ref()
}

/// Applies `f` to consecutive chunks, returning results in chunk order
/// regardless of scheduling.
pub fn map_chunks<T, R, F>(items: &[T], chunk: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&[T]) -> R + Sync + Send,
{
    let chunk = chunk.max(1);
    match pool() {
        Some(p) => {
            use rayon::prelude::*;
            p.install(|| items.par_chunks(chunk).map(&f).collect())
        }
        None => items.chunks(chunk).map(f).collect(),
    }
}

/// Like [`map_chunks`], with per-worker scratch state built by `init`.
pub fn map_chunks_with<T, R, W, I, F>(items: &[T], chunk: usize, init: I, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    I: Fn() -> W + Sync + Send,
    F: Fn(&mut W, &[T]) -> R + Sync + Send,
{
    let chunk = chunk.max(1);
    match pool() {
        Some(p) => {
            use rayon::prelude::*;
            p.install(|| items.par_chunks(chunk).map_init(&init, &f).collect())
        }
        None => {
            let mut w = init();
            items.chunks(chunk).map(|c| f(&mut w, c)).collect()
        }
    }
}
