//! Profile sweeps shared by the dispatchers.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::par;
use crate::report::{Outcome, SolverReport, SolverStats};

pub(crate) type Runner<'a> = Box<dyn Fn(&mut ChaCha8Rng, u64) -> Result<SolverReport> + Sync + Send + 'a>;

/// One profile (or profile class) and its round budget.
pub(crate) struct Task<'a> {
    pub repeats: u64,
    pub run: Runner<'a>,
}

/// Runs every task in two passes (a quarter of each budget first, then the
/// rest) and returns the first verified solution in task order.
///
/// Returns `RetryableFailure` when nothing was found and some task had all
/// of its rounds abandoned at the list cap.
pub(crate) fn run<R: Rng + ?Sized>(algorithm: &str, tasks: &[Task<'_>], rng: &mut R) -> Result<SolverReport> {
    let master: u64 = rng.gen();
    let mut items: Vec<(u64, usize, u64)> = Vec::new();
    for (pass, share) in [(0u64, 0usize), (1, 1)] {
        for (i, t) in tasks.iter().enumerate() {
            let first = t.repeats.div_ceil(4).max(1).min(t.repeats);
            let reps = if share == 0 { first } else { t.repeats - first };
            if reps > 0 {
                items.push((pass, i, reps));
            }
        }
    }
    let results = par::scan_until(
        &items,
        |_, &(pass, i, reps)| {
            let mut trng = par::task_rng(master, (pass << 32) | i as u64);
            (tasks[i].run)(&mut trng, reps)
        },
        |r| r.as_ref().map_or(true, |rep| rep.outcome.is_solved()),
    );
    let mut stats = SolverStats::default();
    let mut seen = vec![false; tasks.len()];
    let mut retry: Vec<Option<bool>> = vec![None; tasks.len()];
    for (k, r) in results.into_iter().enumerate() {
        let rep = r?;
        let i = items[k].1;
        seen[i] = true;
        let profiles = stats.profiles;
        stats.absorb(&rep.stats);
        stats.profiles = profiles;
        retry[i] = Some(retry[i].unwrap_or(true) && rep.outcome == Outcome::RetryableFailure);
        if rep.outcome.is_solved() {
            stats.profiles = seen.iter().filter(|&&s| s).count() as u64;
            return Ok(SolverReport::new(algorithm, rep.outcome, stats));
        }
    }
    stats.profiles = seen.iter().filter(|&&s| s).count() as u64;
    let outcome = if retry.contains(&Some(true)) { Outcome::RetryableFailure } else { Outcome::NoSolutionFound };
    Ok(SolverReport::new(algorithm, outcome, stats))
}
