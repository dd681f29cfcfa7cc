//! Execution strategy for embarrassingly parallel batches (sweep cells,
//! basin grid points, random parameter draws).
//!
//! Results are always returned in input order, so output does not depend on
//! the worker count. Without the `parallel` feature every strategy runs
//! sequentially.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Execution {
    Sequential,
    /// Data-parallel over a thread pool; `None` uses the global pool.
    #[default]
    Parallel,
    /// Data-parallel over a dedicated pool with this many workers.
    Workers(usize),
}

impl Execution {
    /// Strategy for a requested worker count (`0` or `1` means sequential).
    pub fn from_workers(workers: Option<usize>) -> Self {
        match workers {
            None => Execution::Parallel,
            Some(0) | Some(1) => Execution::Sequential,
            Some(n) => Execution::Workers(n),
        }
    }

    /// Whether work actually fans out in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self != Execution::Sequential
    }

    /// Applies `f` to every item, preserving order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            match self {
                Execution::Sequential => {}
                Execution::Parallel => return items.par_iter().map(&f).collect(),
                Execution::Workers(n) => {
                    if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                        return pool.install(|| items.par_iter().map(&f).collect());
                    }
                }
            }
        }
        items.iter().map(f).collect()
    }
}
