//! Execution-mode switch for the data-parallel loops (multi-seed solves,
//! Monte-Carlo audits). Work is split into deterministic chunks keyed by
//! index, so the sequential and rayon paths produce bit-identical results;
//! only wall-clock time differs.

/// How a fan-out loop executes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
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

/// Order-preserving indexed map over `0..count`.
pub(crate) fn indexed_map<T, F>(par: Parallelism, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match par {
        Parallelism::Sequential => (0..count).map(f).collect(),
        #[cfg(feature = "parallel")]
        Parallelism::Rayon => {
            use rayon::prelude::*;
            (0..count).into_par_iter().map(f).collect()
        }
    }
}
