//! Data-parallel dispatch. With the `parallel` feature (default) the heavy
//! inner loops fan out through rayon; without it the same helpers run
//! sequentially so the crate builds on a plain single-threaded toolchain.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, preserving order.
pub(crate) fn map_vec<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}

/// Maps `f` over `0..n`, preserving order.
pub(crate) fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Short-circuiting universal quantifier over `items`.
pub(crate) fn all_vec<T, F>(items: Vec<T>, f: F) -> bool
where
    T: Send + Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().all(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().all(f)
    }
}

/// Runs `f` inside a thread pool of the requested size. `None` keeps the
/// global default (or the `FAIRBANDIT_THREADS` override applied by the CLI).
pub fn with_thread_pool<R, F>(threads: Option<usize>, f: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    #[cfg(feature = "parallel")]
    {
        match threads {
            Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .expect("failed to build thread pool")
                .install(f),
            _ => f(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        f()
    }
}
