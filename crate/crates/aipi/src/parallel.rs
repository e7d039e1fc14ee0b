//! Data-parallel map with a sequential fallback.
//!
//! Parallel execution reduces into index-ordered slots, so output is
//! identical to the sequential path regardless of thread count. Disable the
//! `parallel` feature to force the sequential implementation.

#[cfg(feature = "parallel")]
pub fn map_indexed<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

/// Sequential map, kept callable under either feature for benchmarking the
/// two paths against each other.
pub fn map_sequential<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}
