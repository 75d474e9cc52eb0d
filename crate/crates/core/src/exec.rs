//! Data-parallel evaluation with a sequential fallback.
//!
//! Every batch of independent evaluations (grid sweeps, slice grids,
//! branch-and-bound probes, contour pair searches) goes through
//! [`Executor::map`]. Results are always returned in input order, so the
//! choice of executor never changes an answer, only how long it takes.

/// How a batch of independent evaluations is scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Executor {
    /// Evaluate on the calling thread, in order.
    Sequential,
    /// Evaluate on the rayon global pool.
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for Executor {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        {
            Executor::Parallel
        }
        #[cfg(not(feature = "parallel"))]
        {
            Executor::Sequential
        }
    }
}

impl Executor {
    /// All executors compiled into this build.
    pub fn available() -> Vec<Executor> {
        vec![
            Executor::Sequential,
            #[cfg(feature = "parallel")]
            Executor::Parallel,
        ]
    }

    pub fn name(self) -> &'static str {
        match self {
            Executor::Sequential => "sequential",
            #[cfg(feature = "parallel")]
            Executor::Parallel => "parallel",
        }
    }

    /// Applies `f` to every item, preserving order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            Executor::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Executor::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
        }
    }

    /// Like [`Executor::map`], stopping at the first error in input order.
    pub fn try_map<T, R, E, F>(self, items: &[T], f: F) -> Result<Vec<R>, E>
    where
        T: Sync,
        R: Send,
        E: Send,
        F: Fn(&T) -> Result<R, E> + Sync + Send,
    {
        self.map(items, f).into_iter().collect()
    }
}
