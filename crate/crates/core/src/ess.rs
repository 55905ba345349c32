//! Equal Subset Sum (`C = [-1:1]`) via good solution pairs.
//!
//! A solution `c` is split as `a - b` with `a, b` in `[0:2]^n`, each having
//! `floor(n/2)` ones and `eps_n` twos. Filtering by a residue class keeps a
//! small list; vectors with equal `v·x` are then paired by the
//! compatibility tester, which rejects pseudosolutions (differences with
//! entries `±2`).

use rand::Rng;

use crate::coeff::{CoeffKind, CoefficientSet};
use crate::compat::compatible_distinct_pair;
use crate::error::{Error, Result};
use crate::hashing::{round_cap, sample_prime, ResidueClass, WeightedResidueDp};
use crate::instance::{dot, is_solution, Instance, Solution};
use crate::mitm::{self, check_profile};
use crate::par;
use crate::profile::{binomial, enumerate_profiles, multinomial, ProfileFilter, SolutionProfile};
use crate::report::{Outcome, SolverReport, SolverStats};
use crate::rerandomize::rerandomize;
use crate::sweep::{self, Task};
use crate::Sum;

/// Optimal relative number of twos.
pub const DEFAULT_EPS: f64 = 0.04493;

/// Compatibility rounds per bucket.
pub const COMPAT_REPEATS: u64 = 3;

fn balanced_counts(profile: &SolutionProfile) -> Result<(usize, usize)> {
    let (pos, neg, zero) = (profile.count(1), profile.count(-1), profile.count(0));
    if pos != neg {
        return Err(Error::Precondition(format!("profile has {pos} ones and {neg} minus ones")));
    }
    Ok((pos, zero))
}

/// `C(pi(1), eps_n)^2 * 2^{pi(0)}`, saturating.
pub fn good_pair_count(profile: &SolutionProfile, eps_n: usize) -> Result<u128> {
    let (pos, zero) = balanced_counts(profile)?;
    if eps_n > pos {
        return Err(Error::InvalidParameter(format!("eps_n = {eps_n} exceeds pi(1) = {pos}")));
    }
    let b = binomial(pos, eps_n);
    Ok(b.saturating_mul(b).saturating_mul(1u128.checked_shl(zero as u32).unwrap_or(u128::MAX)))
}

/// Exact number of good pairs for one `c`: the ones constraint fixes
/// `floor(pi(0)/2)` of the zero coordinates to `(1, 1)`, giving
/// `C(pi(1), eps_n)^2 * C(pi(0), floor(pi(0)/2))`.
pub fn good_pair_count_exact(profile: &SolutionProfile, eps_n: usize) -> Result<u128> {
    let (pos, zero) = balanced_counts(profile)?;
    if eps_n > pos {
        return Err(Error::InvalidParameter(format!("eps_n = {eps_n} exceeds pi(1) = {pos}")));
    }
    let b = binomial(pos, eps_n);
    Ok(b.saturating_mul(b).saturating_mul(binomial(zero, zero / 2)))
}

/// `a` and `b` have `floor(n/2)` ones and `eps_n` twos each, `a - b = c`,
/// and zeros of `c` sit only under `(0, 0)` or `(1, 1)`.
pub fn is_good_pair(a: &[i64], b: &[i64], c: &[i64], eps_n: usize) -> bool {
    let n = c.len();
    if a.len() != n || b.len() != n {
        return false;
    }
    let shape = |v: &[i64]| {
        v.iter().all(|&e| (0..=2).contains(&e))
            && v.iter().filter(|&&e| e == 1).count() == n / 2
            && v.iter().filter(|&&e| e == 2).count() == eps_n
    };
    shape(a)
        && shape(b)
        && a.iter().zip(b).zip(c).all(|((&u, &v), &z)| u - v == z && (z != 0 || u <= 1))
}

/// Default `eps_n` for a profile: `round(DEFAULT_EPS n)`, at most `pi(1)`
/// and strictly below `n/12`.
pub fn default_eps_n(n: usize, pos: usize) -> usize {
    let mut e = (DEFAULT_EPS * n as f64).round() as usize;
    e = e.min(pos);
    while e > 0 && 12 * e >= n {
        e -= 1;
    }
    e
}

fn require_ess(instance: &Instance) -> Result<()> {
    let set = instance.coeff_set();
    if set.kind != CoeffKind::FullRange || set.d != 1 {
        return Err(Error::InvalidParameter(format!("Equal Subset Sum needs [-1:1], got {set}")));
    }
    Ok(())
}

/// Good-pair rounds for profile `pi` with `pi(1) = pi(-1)`,
/// `pi(0) <= n/3` and `12 eps_n <= n`.
pub fn ess_solve_profile<R: Rng + ?Sized>(
    instance: &Instance,
    profile: &SolutionProfile,
    eps_n: usize,
    rng: &mut R,
    repeats: u64,
) -> Result<SolverReport> {
    require_ess(instance)?;
    check_profile(instance, profile)?;
    let n = instance.n();
    let (_, zero) = balanced_counts(profile)?;
    if 3 * zero > n {
        return Err(Error::Precondition(format!("pi(0) = {zero} exceeds n/3")));
    }
    if 12 * eps_n > n {
        return Err(Error::Precondition(format!("eps_n = {eps_n} exceeds n/12")));
    }
    let p_max = good_pair_count_exact(profile, eps_n)?.min(1 << 62) as u64;
    let ones = n / 2;
    let space = multinomial(&[ones, eps_n, n - ones - eps_n]) as f64;
    let cap = round_cap(n, space, p_max);
    let eps = eps_n as f64 / n as f64;
    let mut stats = SolverStats { profiles: 1, ..Default::default() };
    for _ in 0..repeats {
        stats.rounds += 1;
        let (p, r) = if p_max < 2 {
            (1, 0)
        } else {
            let p = sample_prime(p_max, rng)?;
            (p, rng.gen_range(0..p))
        };
        if p > 1 {
            stats.last_prime = Some(p);
        }
        let dp = WeightedResidueDp::build(instance.x(), ones, eps_n, p)?;
        let s = match dp.enumerate(r, cap) {
            ResidueClass::Complete(s) => s,
            ResidueClass::CapExceeded { .. } => {
                stats.cap_hits += 1;
                continue;
            }
        };
        stats.saw_list(s.len());
        let buckets = bucket_by_dot(instance.x(), s);
        let master: u64 = rng.gen();
        let hits = par::map(&buckets, |k, bucket| {
            let mut brng = par::task_rng(master, k as u64);
            compatible_distinct_pair(bucket, eps, &mut brng, COMPAT_REPEATS)
        });
        for (bucket, res) in buckets.iter().zip(hits) {
            let res = res?;
            stats.candidates += res.candidates;
            if let Some((i, j)) = res.pair {
                let c: Vec<i64> = bucket[i].iter().zip(&bucket[j]).map(|(u, v)| u - v).collect();
                if is_solution(instance, &c)? {
                    return Ok(SolverReport::new("ess", Outcome::Solved(Solution::new(c)), stats));
                }
            }
        }
    }
    let outcome = if repeats > 0 && stats.cap_hits == repeats { Outcome::RetryableFailure } else { Outcome::NoSolutionFound };
    Ok(SolverReport::new("ess", outcome, stats))
}

/// Groups vectors by `v·x`, keeping groups of size at least two, in
/// ascending order of the dot product.
fn bucket_by_dot(x: &[i64], s: Vec<Vec<i64>>) -> Vec<Vec<Vec<i64>>> {
    let mut keyed: Vec<(Sum, Vec<i64>)> = s.into_iter().map(|v| (dot(x, &v), v)).collect();
    keyed.sort_by_key(|a| a.0);
    let mut out: Vec<Vec<Vec<i64>>> = Vec::new();
    let mut last: Option<Sum> = None;
    for (key, v) in keyed {
        if last == Some(key) {
            out.last_mut().unwrap().push(v);
        } else {
            out.push(vec![v]);
            last = Some(key);
        }
    }
    out.retain(|b| b.len() >= 2);
    out
}

/// Rounds per support class.
pub fn default_ess_rounds(n: usize) -> u64 {
    4 * n.max(12) as u64
}

/// Full Equal Subset Sum solver. Solutions of even support `k` with at most
/// `n/3` zeros are handled per support class: every round flips random
/// signs of `x` (making `pi(1) = pi(-1)` likely) and runs one good-pair
/// round. All other profiles go to [`mitm::unbalanced_sb`].
pub fn solve_ess<R: Rng + ?Sized>(instance: &Instance, rng: &mut R) -> Result<SolverReport> {
    require_ess(instance)?;
    let set: CoefficientSet = instance.coeff_set();
    let n = instance.n();
    let mut entries: Vec<(f64, Task<'_>)> = Vec::new();
    for profile in enumerate_profiles(n, set, ProfileFilter::All).filter(|p| !p.is_zero_only()) {
        let zero = profile.count(0);
        let support = n - zero;
        let size = profile.ln_size();
        if support % 2 == 1 || 3 * zero > n {
            entries.push((
                size,
                Task {
                    repeats: mitm::default_repeats(&profile),
                    run: Box::new(move |rng, reps| mitm::unbalanced_sb(instance, &profile, rng, reps)),
                },
            ));
        } else if profile.count(1) == profile.count(-1) {
            let pos = support / 2;
            let eps_n = default_eps_n(n, pos);
            entries.push((
                size,
                Task {
                    repeats: default_ess_rounds(n),
                    run: Box::new(move |rng, reps| {
                        let mut stats = SolverStats { profiles: 1, ..Default::default() };
                        let mut cap_hits = 0;
                        for _ in 0..reps {
                            let (flipped, signs) = rerandomize(instance, rng);
                            let rep = ess_solve_profile(&flipped, &profile, eps_n, rng, 1)?;
                            stats.absorb(&rep.stats);
                            stats.profiles = 1;
                            match rep.outcome {
                                Outcome::Solved(sol) => {
                                    let c = signs.lift(&sol.c);
                                    if is_solution(instance, &c)? {
                                        return Ok(SolverReport::new("ess", Outcome::Solved(Solution::new(c)), stats));
                                    }
                                }
                                Outcome::RetryableFailure => cap_hits += 1,
                                Outcome::NoSolutionFound => {}
                            }
                        }
                        let outcome =
                            if reps > 0 && cap_hits == reps { Outcome::RetryableFailure } else { Outcome::NoSolutionFound };
                        Ok(SolverReport::new("ess", outcome, stats))
                    }),
                },
            ));
        }
    }
    entries.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let tasks: Vec<Task<'_>> = entries.into_iter().map(|(_, t)| t).collect();
    sweep::run("ess", &tasks, rng)
}
