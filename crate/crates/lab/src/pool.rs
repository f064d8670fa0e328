//! The worker pool handed to the core as a [`ParMap`].

use gappath_core::ParMap;
use rayon::prelude::*;

/// Environment variable the CLI reads for the default thread count.
pub const THREADS_ENV: &str = "GAPPATH_THREADS";

pub struct Pool {
    inner: rayon::ThreadPool,
}

impl Pool {
    /// `None` uses one thread per logical CPU.
    pub fn new(threads: Option<usize>) -> anyhow::Result<Pool> {
        let inner = rayon::ThreadPoolBuilder::new().num_threads(threads.unwrap_or(0)).build()?;
        Ok(Pool { inner })
    }

    pub fn threads(&self) -> usize {
        self.inner.current_num_threads()
    }
}

impl ParMap for Pool {
    fn map<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        if self.threads() == 1 {
            return (0..len).map(f).collect();
        }
        self.inner.install(|| (0..len).into_par_iter().map(f).collect())
    }
}
