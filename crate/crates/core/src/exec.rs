//! Abstract parallel-map capability.
//!
//! Heavy loops (replicas, enumeration prefixes) are written against
//! [`ParMap`] so the core stays free of any thread runtime. Results always
//! come back in index order, which keeps downstream reductions independent
//! of how the work was scheduled.

use alloc::vec::Vec;

pub trait ParMap: Sync {
    /// `(0..len).map(f).collect()`, possibly evaluated concurrently.
    fn map<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs everything on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Serial;

impl ParMap for Serial {
    fn map<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..len).map(f).collect()
    }
}
