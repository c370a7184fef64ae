//! Data-parallel helpers.
//!
//! With the `parallel` feature these dispatch to rayon; without it they are
//! ordinary sequential iterators. Output order always follows input order,
//! so results do not depend on scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, collecting results in input order.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    let out = items.par_iter().map(f).collect();

    #[cfg(not(feature = "parallel"))]
    let out = items.iter().map(f).collect();

    out
}

/// Maps `f` over `0..n`, collecting results in index order.
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    let out = (0..n).into_par_iter().map(f).collect();

    #[cfg(not(feature = "parallel"))]
    let out = (0..n).map(f).collect();

    out
}

/// Whether batch helpers run on the rayon pool.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
