//! Data parallelism over independent evaluations.
//!
//! With the `parallel` feature the maps below run on the rayon pool; without
//! it, or after [`set_parallel(false)`](set_parallel), they run in order on
//! the calling thread. Results always come back in input order, so sums
//! formed from them do not depend on scheduling.

use std::sync::atomic::{AtomicBool, Ordering};

use crate::error::{Error, Result};

/// Environment variable holding the largest number of worker threads.
pub const THREADS_ENV: &str = "HELMHOLTZ_GASPT_MAX_THREADS";

static ENABLED: AtomicBool = AtomicBool::new(true);

/// Switch the parallel maps on or off at run time.
pub fn set_parallel(on: bool) {
    ENABLED.store(on, Ordering::Relaxed);
}

/// Whether maps currently run in parallel.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel") && ENABLED.load(Ordering::Relaxed)
}

/// `items.iter().map(f).collect()`, in parallel when enabled.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// Thread cap read from [`THREADS_ENV`]; `None` when unset or empty.
pub fn max_threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(s) if s.trim().is_empty() => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(Error::InvalidParams(format!(
                "{THREADS_ENV} must be a positive integer, got {s:?}"
            ))),
        },
        Err(_) => Ok(None),
    }
}

/// Size the global worker pool. Has an effect only before the pool is first
/// used; later calls are ignored. A cap of 1 also turns parallel maps off.
pub fn configure_threads(max: Option<usize>) {
    let Some(n) = max else { return };
    if n <= 1 {
        set_parallel(false);
    }
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_keeps_order() {
        let v: Vec<u64> = (0..1000).collect();
        let sq = map(&v, |x| x * x);
        assert!(sq.iter().enumerate().all(|(i, s)| *s == (i * i) as u64));
    }
}
