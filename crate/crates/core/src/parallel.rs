//! Execution helpers for data-parallel inner loops.
//!
//! With the `parallel` feature (default) the indexed maps fan out over the
//! rayon pool; without it they run sequentially. Results are collected in
//! index order in both cases, so downstream reductions see the same
//! summation order and outputs are bitwise independent of the thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n`, preserving index order in the output.
pub fn indexed_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        indexed_map_seq(n, f)
    }
}

/// Sequential reference implementation of [`indexed_map`]. Always available;
/// the benchmark suite compares it against the parallel path.
pub fn indexed_map_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}
