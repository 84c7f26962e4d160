use std::sync::Arc;

use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

/// Executes replicates on a fixed-size thread pool.
#[derive(Clone)]
pub struct Runner {
    pool: Arc<ThreadPool>,
}

impl Runner {
    /// A pool with `threads` workers; `0` means one per available core.
    pub fn new(threads: usize) -> Self {
        let pool = ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        Self { pool: Arc::new(pool) }
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// `f(0), …, f(n-1)` in index order.
    pub fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..n).into_par_iter().map(&f).collect())
    }
}

impl Default for Runner {
    fn default() -> Self {
        Self::new(0)
    }
}

impl std::fmt::Debug for Runner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Runner")
            .field("threads", &self.threads())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_output() {
        let out = Runner::new(3).map(100, |i| i * i);
        assert_eq!(out, (0..100).map(|i| i * i).collect::<Vec<_>>());
        assert_eq!(Runner::new(2).threads(), 2);
    }
}
