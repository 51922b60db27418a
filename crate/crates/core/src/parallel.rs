//! Worker pool shared by the exhaustive sweeps.

use std::sync::OnceLock;

use rayon::{ThreadPool, ThreadPoolBuilder};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "MDAG_PROBE_THREADS";

fn requested_threads() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Pool sized by `MDAG_PROBE_THREADS`, or by machine parallelism when unset.
pub fn pool() -> &'static ThreadPool {
    static POOL: OnceLock<ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut b = ThreadPoolBuilder::new();
        if let Some(n) = requested_threads() {
            b = b.num_threads(n);
        }
        b.build().expect("thread pool")
    })
}

/// Run `f` inside the shared pool.
pub fn install<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    pool().install(f)
}
