//! Execution policy for the data-parallel loops (basis validation, search).
//!
//! With the `parallel` feature disabled every policy runs sequentially, so
//! callers never need `cfg` guards of their own.

/// How an exhaustive loop is executed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// `workers == 0` uses the global rayon pool.
    Parallel {
        workers: usize,
    },
    #[default]
    Auto,
}

impl Execution {
    /// `1` is sequential, `0` is the global pool, anything else a dedicated pool.
    pub fn from_workers(workers: usize) -> Self {
        match workers {
            1 => Execution::Sequential,
            w => Execution::Parallel { workers: w },
        }
    }

    pub fn is_parallel(&self) -> bool {
        cfg!(feature = "parallel") && !matches!(self, Execution::Sequential)
    }

    /// Ordered map over `0..len`. Output order never depends on the policy.
    pub fn map_range<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            match *self {
                Execution::Sequential => (0..len).map(f).collect(),
                Execution::Auto => (0..len).into_par_iter().map(f).collect(),
                Execution::Parallel { workers } => self.install(workers, || (0..len).into_par_iter().map(&f).collect()),
            }
        }
        #[cfg(not(feature = "parallel"))]
        {
            (0..len).map(f).collect()
        }
    }

    #[cfg(feature = "parallel")]
    fn install<T: Send>(&self, workers: usize, op: impl FnOnce() -> T + Send) -> T {
        if workers == 0 {
            return op();
        }
        match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
            Ok(pool) => pool.install(op),
            Err(_) => op(),
        }
    }
}
