//! Deterministic parallel replicate loops.
//!
//! Each replicate owns its own random stream, and results are collected in
//! replicate order, so the output never depends on the worker count.

use rayon::prelude::*;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "REX_THREADS";

/// Worker count from `REX_THREADS`, else the available hardware parallelism.
pub fn default_workers() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

/// Evaluates `f(0), …, f(count − 1)` on `workers` threads, returning results in index order.
pub fn map_replicates<T, F>(count: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    let workers = workers.max(1);
    if workers == 1 {
        return (0..count).map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| (0..count).into_par_iter().map(&f).collect()),
        Err(_) => (0..count).map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_preserved_across_worker_counts() {
        let one = map_replicates(1000, 1, |i| i * i);
        let many = map_replicates(1000, 8, |i| i * i);
        assert_eq!(one, many);
        assert_eq!(one[31], 961);
    }
}
