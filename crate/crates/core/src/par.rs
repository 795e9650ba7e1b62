//! Order-preserving map over a slice, backed by rayon when the `parallel`
//! feature is enabled. Results always come back in input order, so callers
//! get identical output whichever path runs.

/// True when the crate was built with rayon support.
pub const fn available() -> bool {
    cfg!(feature = "parallel")
}

pub fn map<T, R, F>(items: &[T], parallel: bool, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if parallel {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = parallel;
    items.iter().map(f).collect()
}
