//! Data-parallel kernels with a sequential fallback.
//!
//! Every search and batch evaluation in this crate funnels through these
//! helpers. With the `parallel` feature (default) they run on rayon; without
//! it they run on plain iterators. Both paths return identical results: maps
//! preserve input order and first-match searches honor candidate order.

/// Sequential implementations, always compiled so benchmarks can compare
/// them against the rayon path within a single binary.
pub mod sequential {
    pub fn map_collect<T: Sync, U: Send, F>(items: &[T], f: F) -> Vec<U>
    where
        F: Fn(&T) -> U + Sync + Send,
    {
        items.iter().map(f).collect()
    }

    pub fn map_indexed<U: Send, F>(n: usize, f: F) -> Vec<U>
    where
        F: Fn(usize) -> U + Sync + Send,
    {
        (0..n).map(f).collect()
    }

    /// First `Some` in candidate order.
    pub fn find_map_first<T: Sync, U: Send, F>(items: &[T], f: F) -> Option<U>
    where
        F: Fn(&T) -> Option<U> + Sync + Send,
    {
        items.iter().find_map(f)
    }
}

#[cfg(feature = "parallel")]
pub mod dispatch {
    use rayon::prelude::*;

    pub fn map_collect<T: Sync, U: Send, F>(items: &[T], f: F) -> Vec<U>
    where
        F: Fn(&T) -> U + Sync + Send,
    {
        items.par_iter().map(f).collect()
    }

    pub fn map_indexed<U: Send, F>(n: usize, f: F) -> Vec<U>
    where
        F: Fn(usize) -> U + Sync + Send,
    {
        (0..n).into_par_iter().map(f).collect()
    }

    pub fn find_map_first<T: Sync, U: Send, F>(items: &[T], f: F) -> Option<U>
    where
        F: Fn(&T) -> Option<U> + Sync + Send,
    {
        items.par_iter().find_map_first(f)
    }
}

#[cfg(not(feature = "parallel"))]
pub mod dispatch {
    pub use super::sequential::*;
}

pub use dispatch::*;
