//! Execution strategy for the data-parallel sweeps.
//!
//! With the `parallel` feature (default) [`Exec::Parallel`] fans work out over
//! the current rayon pool; without it every strategy runs sequentially. All
//! reductions used with this module are associative and tie-break by index,
//! so results do not depend on the strategy or the worker count.

use std::ops::Range;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// True when work will actually be split across threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    pub fn map_reduce<T, M, I, R>(self, range: Range<u64>, map: M, identity: I, reduce: R) -> T
    where
        T: Send,
        M: Fn(u64) -> T + Sync + Send,
        I: Fn() -> T + Sync + Send,
        R: Fn(T, T) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            use rayon::prelude::*;
            return range.into_par_iter().map(map).reduce(identity, reduce);
        }
        range.map(map).fold(identity(), reduce)
    }

    /// Maps every element, keeping input order in the output.
    pub fn map_collect<A, T, M>(self, items: &[A], map: M) -> Vec<T>
    where
        A: Sync,
        T: Send,
        M: Fn(&A) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            use rayon::prelude::*;
            return items.par_iter().map(map).collect();
        }
        items.iter().map(map).collect()
    }
}
