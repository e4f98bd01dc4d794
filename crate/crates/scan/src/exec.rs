use biorth_core::exec::Executor;
use rayon::prelude::*;
use rayon::ThreadPool;

/// Runs grid cells on a rayon pool. Results come back in index order, so
/// the worker count never changes a reduction.
pub struct RayonExecutor {
    pool: ThreadPool,
}

impl RayonExecutor {
    /// A pool with `jobs` workers; `0` lets rayon choose.
    pub fn new(jobs: usize) -> Self {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        RayonExecutor { pool }
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for RayonExecutor {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..n).into_par_iter().map(f).collect())
    }
}
