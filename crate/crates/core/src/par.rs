//! Deterministic data-parallel helpers.
//!
//! With the `parallel` feature these run on the current rayon pool; without
//! it they are plain loops. In both cases results are identical: work items
//! carry their own seeds and early exits keep the first hit in input order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Independent rng for task `stream` under a master seed.
pub fn task_rng(master: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(stream);
    rng
}

pub fn current_threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

pub fn map<T: Sync, R: Send>(items: &[T], f: impl Fn(usize, &T) -> R + Sync + Send) -> Vec<R> {
    #[cfg(feature = "parallel")]
    {
        items.par_iter().enumerate().map(|(i, t)| f(i, t)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().enumerate().map(|(i, t)| f(i, t)).collect()
    }
}

/// First `Some` in input order.
pub fn find_first<T: Sync, R: Send>(items: &[T], f: impl Fn(usize, &T) -> Option<R> + Sync + Send) -> Option<(usize, R)> {
    #[cfg(feature = "parallel")]
    {
        items.par_iter().enumerate().find_map_first(|(i, t)| f(i, t).map(|r| (i, r)))
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().enumerate().find_map(|(i, t)| f(i, t).map(|r| (i, r)))
    }
}

/// Evaluates `f` over `items` in order until `stop` holds, returning every
/// result up to and including the stopping one.
///
/// The parallel version evaluates chunks concurrently and discards results
/// past the first stop, so the output matches the sequential loop exactly.
pub fn scan_until<T: Sync, R: Send>(
    items: &[T],
    f: impl Fn(usize, &T) -> R + Sync + Send,
    stop: impl Fn(&R) -> bool,
) -> Vec<R> {
    let mut out = Vec::new();
    let chunk = (2 * current_threads()).max(1);
    let mut start = 0;
    while start < items.len() {
        let end = if chunk == 1 { start + 1 } else { (start + chunk).min(items.len()) };
        let batch = map(&items[start..end], |i, t| f(start + i, t));
        for r in batch {
            let done = stop(&r);
            out.push(r);
            if done {
                return out;
            }
        }
        start = end;
    }
    out
}
