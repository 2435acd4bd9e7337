//! Execution mode switch shared by the data-parallel kernels.
//!
//! With the `parallel` feature (on by default) the heavy loops run on rayon.
//! Without it, or when [`Exec::Sequential`] is requested, the same code runs
//! on the calling thread. Both paths reduce in a fixed order, so results do
//! not depend on the mode.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

/// Maps `f` over `0..n` and collects results in index order.
pub(crate) fn map_indexed<T, F>(exec: Exec, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

/// Smallest index in `0..n` for which `f` returns `Some`, with its value.
pub(crate) fn find_first<T, F>(exec: Exec, n: usize, f: F) -> Option<(usize, T)>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().filter_map(|i| f(i).map(|v| (i, v))).find_first(|_| true)
        }
        _ => (0..n).find_map(|i| f(i).map(|v| (i, v))),
    }
}
