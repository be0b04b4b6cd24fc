//! Row-parallel execution helper.
//!
//! The heavy kernels in this crate (two-body transform, lattice-sum
//! generators) are embarrassingly parallel over independent rows. With the
//! `parallel` feature they fan out over rayon's global pool; without it they
//! run as a plain loop. `map_rows_seq` is always the plain loop, so the
//! benchmark suite can compare both strategies inside one build.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n`, collecting results in index order. Parallel when the
/// `parallel` feature is enabled.
#[cfg(feature = "parallel")]
pub(crate) fn map_rows<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Map `f` over `0..n`, collecting results in index order.
#[cfg(not(feature = "parallel"))]
pub(crate) fn map_rows<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Sequential twin of [`map_rows`], available in every build.
pub(crate) fn map_rows_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}
