//! Execution-mode switch shared by the numerical kernels and the batch drivers.
//!
//! With the `parallel` feature (default) row-wise kernels and independent
//! work items are distributed over the rayon pool. Without it, or when
//! [`Parallelism::Sequential`] is requested, the same code runs in a plain
//! loop, producing bit-identical results.

use serde::{Deserialize, Serialize};

/// Matrices with fewer rows than this stay on the calling thread.
pub const ROW_PARALLEL_THRESHOLD: usize = 64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parallelism {
    Sequential,
    #[default]
    Parallel,
}

impl Parallelism {
    /// Whether work will actually be distributed (false when the feature is off).
    pub fn enabled(self) -> bool {
        cfg!(feature = "parallel") && self == Parallelism::Parallel
    }
}

/// Calls `f(row_index, row)` for every row of a row-major buffer.
pub(crate) fn for_each_row<F>(data: &mut [crate::C64], cols: usize, par: Parallelism, f: F)
where
    F: Fn(usize, &mut [crate::C64]) + Sync + Send,
{
    let rows = data.len().checked_div(cols).unwrap_or(0);
    #[cfg(feature = "parallel")]
    {
        if par.enabled() && rows >= ROW_PARALLEL_THRESHOLD {
            use rayon::prelude::*;
            data.par_chunks_mut(cols)
                .enumerate()
                .for_each(|(r, row)| f(r, row));
            return;
        }
    }
    let _ = (par, rows);
    for (r, row) in data.chunks_mut(cols).enumerate() {
        f(r, row);
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map_items<T, R, F>(items: &[T], par: Parallelism, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if par.enabled() && items.len() > 1 {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
    }
    let _ = par;
    items.iter().map(f).collect()
}
