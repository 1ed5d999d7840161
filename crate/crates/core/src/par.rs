//! Index-parallel map used by the sampled checkers and constructions.

use crate::error::Result;
use crate::numeric::Execution;

/// Evaluates `f(0), …, f(count - 1)` and collects the results in index order.
/// The first error in index order is returned.
pub fn try_map<T, F>(count: usize, execution: Execution, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    match execution {
        Execution::Sequential => (0..count).map(f).collect(),
        Execution::Parallel => parallel(count, f),
    }
}

#[cfg(feature = "parallel")]
fn parallel<T, F>(count: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    use rayon::prelude::*;
    // collect into Vec<Result> first so the reported error is the lowest index
    let results: Vec<Result<T>> = (0..count).into_par_iter().map(f).collect();
    results.into_iter().collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel<T, F>(count: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    (0..count).map(f).collect()
}
