//! Deterministic parallel replicate runner.

use anyhow::{Context, Result};
use rayon::prelude::*;

/// Environment variable consulted for the default thread count.
pub const THREADS_ENV: &str = "ALPHADPP_THREADS";

/// Thread count from the flag, then the environment, then rayon's default.
pub fn resolve_threads(flag: Option<usize>) -> Result<usize> {
    if let Some(n) = flag {
        return Ok(n.max(1));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .with_context(|| format!("{THREADS_ENV}={v:?} is not a thread count"))?;
            Ok(n.max(1))
        }
        Err(_) => Ok(rayon::current_num_threads()),
    }
}

/// `f(0), …, f(count - 1)` on a pool of `threads` workers, in index order.
///
/// Each replicate must derive all randomness from its index, so the result is
/// identical for every thread count.
pub fn map_replicates<T, F>(count: u64, threads: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .context("cannot start worker threads")?;
    pool.install(|| (0..count).into_par_iter().map(&f).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        for threads in [1, 3, 8] {
            let v = map_replicates(100, threads, |i| Ok(i * i)).unwrap();
            assert_eq!(v, (0..100).map(|i| i * i).collect::<Vec<_>>());
        }
    }

    #[test]
    fn errors_propagate() {
        let r = map_replicates(10, 2, |i| if i == 7 { anyhow::bail!("boom") } else { Ok(i) });
        assert!(r.is_err());
    }
}
