//! Library side of the `fatoulab` command: configuration, renders, the verification suite and
//! report bundles.

pub mod bundle;
pub mod config;
pub mod render;
pub mod suite;

pub use bundle::ReportBundle;
pub use config::{Config, ConfigError};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "FATOULAB_THREADS";

/// Worker count: `requested` (or all cores), capped by `FATOULAB_THREADS` when it is set.
pub fn thread_count(requested: Option<usize>) -> usize {
    let avail = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let n = requested.unwrap_or(avail).max(1);
    match std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        Some(cap) if cap > 0 => n.min(cap),
        _ => n,
    }
}

pub fn thread_pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build().expect("thread pool")
}
