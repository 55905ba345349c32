//! Representation-technique solver for `C = [-d:d]` and its dispatcher.
//!
//! A solution `c` is written as `a - b` with `a, b` in `[0:d]^n`. Each round
//! keeps only vectors in one random residue class mod a random prime, so the
//! list holds about `(d+1)^n / p` vectors while still containing both halves
//! of some representation with constant probability.

use rand::Rng;

use crate::coeff::{CoeffKind, CoefficientSet};
use crate::error::{Error, Result};
use crate::hashing::{round_cap, sample_prime, ResidueClass, ResidueDp};
use crate::instance::{is_solution, Instance, Solution};
use crate::mitm::{self, check_profile, meet_with, Combine, SumList};
use crate::profile::{enumerate_profiles, is_eps_unbalanced, ProfileFilter, SolutionProfile};
use crate::report::{Outcome, SolverReport, SolverStats};
use crate::sweep::{self, Task};

/// Profiles deviating from `n/|C|` by more than `n / (4|C|)` go to the
/// unbalanced solver.
pub fn routing_eps(coeff_set: CoefficientSet) -> f64 {
    1.0 / (4.0 * coeff_set.cardinality() as f64)
}

/// Rounds per balanced profile.
pub fn default_rounds(n: usize) -> u64 {
    n.max(12) as u64
}

/// Number of pairs `(a, b)` in `[0:d]^n x [0:d]^n` with `a - b = c` for any
/// `c` with profile `pi`: `prod_z (d + 1 - |z|)^{pi(z)}`, saturating.
pub fn solution_pair_count(profile: &SolutionProfile) -> u128 {
    let d = profile.coeff_set().d as i64;
    profile
        .pairs()
        .fold(1u128, |acc, (z, k)| acc.saturating_mul(((d + 1 - z.abs()) as u128).saturating_pow(k as u32)))
}

/// `min(|G|, (d+1)^{floor(n/2)})` with `|G|` from [`solution_pair_count`].
pub fn p_max_with0(profile: &SolutionProfile, d: u32) -> u64 {
    let g = solution_pair_count(profile);
    let cap = (d as u128 + 1).saturating_pow((profile.n() / 2) as u32);
    g.min(cap).min(u64::MAX as u128) as u64
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RoundOutcome {
    Solved(Vec<i64>),
    Miss,
    CapExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundResult {
    pub outcome: RoundOutcome,
    /// `|S|`, or the class size when the cap fired.
    pub list_len: u64,
}

/// One deterministic round with a given modulus and residue. `p = 1`
/// disables filtering.
pub fn balanced_round(instance: &Instance, p: u64, r: u64, cap: u64) -> Result<RoundResult> {
    let d = instance.coeff_set().d as i64;
    let alphabets = vec![(0..=d).collect::<Vec<i64>>(); instance.n()];
    let dp = ResidueDp::build(instance.x(), &alphabets, p)?;
    let s = match dp.enumerate(r, cap) {
        ResidueClass::Complete(s) => s,
        ResidueClass::CapExceeded { size } => return Ok(RoundResult { outcome: RoundOutcome::CapExceeded, list_len: size }),
    };
    let list = SumList::of_vectors(instance.x(), &s);
    let hit = meet_with(&list, &list, Combine::Difference, 0, |a, b| a != b);
    let outcome = match hit {
        Some((a, b)) => {
            let c: Vec<i64> = s[a as usize].iter().zip(&s[b as usize]).map(|(u, v)| u - v).collect();
            debug_assert!(is_solution(instance, &c).unwrap());
            RoundOutcome::Solved(c)
        }
        None => RoundOutcome::Miss,
    };
    Ok(RoundResult { outcome, list_len: s.len() as u64 })
}

fn require_full_range(instance: &Instance) -> Result<u32> {
    match instance.coeff_set().kind {
        CoeffKind::FullRange => Ok(instance.coeff_set().d),
        CoeffKind::NoZero => Err(Error::InvalidParameter(format!(
            "this solver needs a coefficient set containing zero, got {}",
            instance.coeff_set()
        ))),
    }
}

fn run_rounds<R: Rng + ?Sized>(instance: &Instance, p_max: u64, rng: &mut R, repeats: u64) -> Result<SolverReport> {
    let n = instance.n();
    let d = instance.coeff_set().d;
    let space = (d as f64 + 1.0).powi(n as i32);
    let cap = round_cap(n, space, p_max);
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
        let res = balanced_round(instance, p, r, cap)?;
        match res.outcome {
            RoundOutcome::Solved(c) => {
                stats.saw_list(res.list_len as usize);
                stats.candidates += 1;
                return Ok(SolverReport::new("rep0", Outcome::Solved(Solution::new(c)), stats));
            }
            RoundOutcome::Miss => stats.saw_list(res.list_len as usize),
            RoundOutcome::CapExceeded => stats.cap_hits += 1,
        }
    }
    let outcome = if repeats > 0 && stats.cap_hits == repeats { Outcome::RetryableFailure } else { Outcome::NoSolutionFound };
    Ok(SolverReport::new("rep0", outcome, stats))
}

/// Representation rounds tuned to profile `pi`.
pub fn balanced_sb_with0<R: Rng + ?Sized>(
    instance: &Instance,
    profile: &SolutionProfile,
    rng: &mut R,
    repeats: u64,
) -> Result<SolverReport> {
    let d = require_full_range(instance)?;
    check_profile(instance, profile)?;
    run_rounds(instance, p_max_with0(profile, d), rng, repeats)
}

/// Full solver for `[-d:d]`: sweeps every profile, sending unbalanced ones
/// to [`mitm::unbalanced_sb`] and balanced ones to the representation rounds.
pub fn solve_with0<R: Rng + ?Sized>(instance: &Instance, rng: &mut R) -> Result<SolverReport> {
    let d = require_full_range(instance)?;
    let set = instance.coeff_set();
    let n = instance.n();
    let eps = routing_eps(set);
    let mut profiles: Vec<SolutionProfile> =
        enumerate_profiles(n, set, ProfileFilter::All).filter(|p| !p.is_zero_only()).collect();
    profiles.sort_by(|a, b| b.ln_size().partial_cmp(&a.ln_size()).unwrap());
    let mut tasks: Vec<Task<'_>> = Vec::new();
    // Balanced rounds depend on the profile only through p_max.
    let mut balanced_seen: Vec<u64> = Vec::new();
    for profile in profiles {
        if is_eps_unbalanced(&profile, eps) {
            let repeats = mitm::default_repeats(&profile);
            tasks.push(Task {
                repeats,
                run: Box::new(move |rng, reps| mitm::unbalanced_sb(instance, &profile, rng, reps)),
            });
        } else {
            let p_max = p_max_with0(&profile, d);
            if balanced_seen.contains(&p_max) {
                continue;
            }
            balanced_seen.push(p_max);
            tasks.push(Task { repeats: default_rounds(n), run: Box::new(move |rng, reps| run_rounds(instance, p_max, rng, reps)) });
        }
    }
    sweep::run("rep0", &tasks, rng)
}
