//! Execution-mode switch for the data-parallel loops.
//!
//! With the `parallel` feature the [`Exec::Parallel`] mode dispatches to rayon;
//! without it every mode runs sequentially. Results never depend on the mode:
//! all helpers preserve index order and pick winners by lowest index.

use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
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

/// Maps `f` over `range`, returning results in index order.
pub fn map<T, F>(exec: Exec, range: Range<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            range.into_par_iter().map(f).collect()
        }
        _ => range.map(f).collect(),
    }
}

/// Lowest index in `range` for which `f` returns `Some`, with its value.
pub fn find_first<T, F>(exec: Exec, range: Range<usize>, f: F) -> Option<(usize, T)>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            range.into_par_iter().find_map_first(|i| f(i).map(|v| (i, v)))
        }
        _ => range.into_iter().find_map(|i| f(i).map(|v| (i, v))),
    }
}

/// Splits `0..total` into contiguous chunks of roughly `chunk` items.
pub fn chunks(total: u64, chunk: u64) -> Vec<Range<u64>> {
    let chunk = chunk.max(1);
    let mut out = Vec::new();
    let mut start = 0;
    while start < total {
        let end = (start + chunk).min(total);
        out.push(start..end);
        start = end;
    }
    out
}
