//! Sorted sum lists, the generic meet step and the two plain
//! meet-in-the-middle solvers.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::instance::{is_solution, Instance, Solution};
use crate::profile::{binomial, enumerate_profiles, multinomial, ProfileFilter, SolutionProfile};
use crate::sweep::{self, Task};
use crate::report::{Outcome, SolverReport, SolverStats};
use crate::Sum;

/// Largest list a meet-in-the-middle solver will build.
pub const LIST_GUARD: f64 = (1u64 << 24) as f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combine {
    /// Match `l + r = target`.
    Sum,
    /// Match `l - r = target`.
    Difference,
}

/// `(sum, payload)` entries sorted by sum, then payload.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SumList {
    entries: Vec<(Sum, u32)>,
}

impl SumList {
    pub fn from_unsorted(mut entries: Vec<(Sum, u32)>) -> Self {
        entries.sort_unstable();
        Self { entries }
    }

    /// Wraps entries that must already be sorted.
    pub fn from_sorted(entries: Vec<(Sum, u32)>) -> Result<Self> {
        if entries.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Unsorted);
        }
        Ok(Self { entries })
    }

    /// Sums of `x` against each vector, with payload = position.
    pub fn of_vectors(x: &[i64], vectors: &[Vec<i64>]) -> Self {
        Self::from_unsorted(vectors.iter().enumerate().map(|(i, v)| (crate::instance::dot(x, v), i as u32)).collect())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(Sum, u32)] {
        &self.entries
    }
}

/// First matching pair of payloads.
pub fn meet(l: &SumList, r: &SumList, combine: Combine, target: Sum) -> Option<(u32, u32)> {
    meet_with(l, r, combine, target, |_, _| true)
}

/// First matching pair of payloads that `accept` approves. Pairs are
/// visited in ascending order of the left sum.
pub fn meet_with(
    l: &SumList,
    r: &SumList,
    combine: Combine,
    target: Sum,
    mut accept: impl FnMut(u32, u32) -> bool,
) -> Option<(u32, u32)> {
    let le = &l.entries;
    let re = &r.entries;
    let mut i = 0;
    // For Sum the right list is scanned downwards, for Difference upwards.
    let mut j: isize = match combine {
        Combine::Sum => re.len() as isize - 1,
        Combine::Difference => 0,
    };
    while i < le.len() && j >= 0 && (j as usize) < re.len() {
        let (ls, rs) = (le[i].0, re[j as usize].0);
        let v = match combine {
            Combine::Sum => ls + rs,
            Combine::Difference => ls - rs,
        };
        if v < target {
            i += 1;
            continue;
        }
        if v > target {
            match combine {
                Combine::Sum => j -= 1,
                Combine::Difference => j += 1,
            }
            continue;
        }
        let i_end = i + le[i..].iter().take_while(|e| e.0 == ls).count();
        let ju = j as usize;
        let (j_lo, j_hi) = match combine {
            Combine::Sum => (ju + 1 - re[..=ju].iter().rev().take_while(|e| e.0 == rs).count(), ju + 1),
            Combine::Difference => (ju, ju + re[ju..].iter().take_while(|e| e.0 == rs).count()),
        };
        for a in &le[i..i_end] {
            for b in &re[j_lo..j_hi] {
                if accept(a.1, b.1) {
                    return Some((a.1, b.1));
                }
            }
        }
        i = i_end;
        j = match combine {
            Combine::Sum => j_lo as isize - 1,
            Combine::Difference => j_hi as isize,
        };
    }
    None
}

fn decode(mut index: u64, len: usize, vals: &[i64]) -> Vec<i64> {
    let k = vals.len() as u64;
    let mut v = vec![0; len];
    for slot in v.iter_mut().rev() {
        *slot = vals[(index % k) as usize];
        index /= k;
    }
    v
}

fn full_product_sums(x: &[i64], vals: &[i64]) -> Vec<(Sum, u32)> {
    let k = vals.len();
    let total = k.pow(x.len() as u32);
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; x.len()];
    let mut sum: Sum = x.iter().map(|&v| v as Sum * vals[0] as Sum).sum();
    for p in 0..total {
        out.push((sum, p as u32));
        for i in (0..x.len()).rev() {
            let old = vals[idx[i]];
            idx[i] = (idx[i] + 1) % k;
            sum += x[i] as Sum * (vals[idx[i]] - old) as Sum;
            if idx[i] != 0 {
                break;
            }
        }
    }
    out
}

/// Flips `c` so that its first nonzero entry is positive.
pub fn normalize_sign(c: &mut [i64]) {
    if c.iter().find(|&&z| z != 0).is_some_and(|&z| z < 0) {
        c.iter_mut().for_each(|z| *z = -*z);
    }
}

/// Deterministic meet-in-the-middle over `C^{n/2} x C^{n/2}`. Exhaustive:
/// `NoSolutionFound` certifies that no solution exists. The returned
/// solution has a positive first nonzero entry.
pub fn classic_mitm(instance: &Instance) -> Result<SolverReport> {
    let n = instance.n();
    let vals = instance.coeff_set().values();
    let h = n.div_ceil(2);
    let size = (vals.len() as f64).powi(h as i32);
    if size > LIST_GUARD {
        return Err(Error::GuardExceeded { size, guard: LIST_GUARD });
    }
    let (xa, xb) = instance.x().split_at(h);
    let l = SumList::from_unsorted(full_product_sums(xa, &vals));
    let r = SumList::from_unsorted(full_product_sums(xb, &vals));
    let zero_a = if instance.coeff_set().has_zero() { Some(index_of_zero(h, &vals)) } else { None };
    let zero_b = if instance.coeff_set().has_zero() { Some(index_of_zero(n - h, &vals)) } else { None };
    let hit = meet_with(&l, &r, Combine::Sum, 0, |a, b| !(Some(a) == zero_a && Some(b) == zero_b));
    let stats = SolverStats { rounds: 1, profiles: 0, max_list: l.len().max(r.len()) as u64, ..Default::default() };
    let outcome = match hit {
        Some((a, b)) => {
            let mut c = decode(a as u64, h, &vals);
            c.extend(decode(b as u64, n - h, &vals));
            normalize_sign(&mut c);
            debug_assert!(is_solution(instance, &c).unwrap());
            Outcome::Solved(Solution::new(c))
        }
        None => Outcome::NoSolutionFound,
    };
    Ok(SolverReport::new("mitm", outcome, stats))
}

fn index_of_zero(len: usize, vals: &[i64]) -> u32 {
    let z = vals.iter().position(|&v| v == 0).unwrap() as u64;
    let k = vals.len() as u64;
    (0..len).fold(0u64, |acc, _| acc * k + z) as u32
}

/// Profiles of the two halves: `|A| = ceil(n/2)`, each coefficient split as
/// evenly as possible, odd counts rounding up on side A in ascending order
/// of `z` until `|A|` is reached.
pub fn half_profiles(profile: &SolutionProfile) -> (Vec<usize>, Vec<usize>) {
    let n = profile.n();
    let mut a: Vec<usize> = profile.counts().iter().map(|&k| k / 2).collect();
    let mut need = n.div_ceil(2) - a.iter().sum::<usize>();
    for (i, &k) in profile.counts().iter().enumerate() {
        if need == 0 {
            break;
        }
        if k % 2 == 1 {
            a[i] += 1;
            need -= 1;
        }
    }
    let b = profile.counts().iter().zip(&a).map(|(&k, &x)| k - x).collect();
    (a, b)
}

/// All arrangements of a multiset, in lexicographic order.
pub fn multiset_permutations(counts: &[usize], vals: &[i64]) -> Vec<Vec<i64>> {
    fn rec(counts: &mut [usize], vals: &[i64], cur: &mut Vec<i64>, len: usize, out: &mut Vec<Vec<i64>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in 0..counts.len() {
            if counts[i] > 0 {
                counts[i] -= 1;
                cur.push(vals[i]);
                rec(counts, vals, cur, len, out);
                cur.pop();
                counts[i] += 1;
            }
        }
    }
    let len = counts.iter().sum();
    let mut out = Vec::with_capacity(multinomial(counts).min(1 << 24) as usize);
    rec(&mut counts.to_vec(), vals, &mut Vec::with_capacity(len), len, &mut out);
    out
}

/// Probability that a uniform split of the coordinates puts exactly the
/// [`half_profiles`] counts of each coefficient into side A.
pub fn split_probability(profile: &SolutionProfile) -> f64 {
    let (a, _) = half_profiles(profile);
    let n = profile.n();
    let num: f64 = profile.counts().iter().zip(&a).map(|(&k, &x)| binomial(k, x) as f64).product();
    num / binomial(n, n.div_ceil(2)) as f64
}

/// Rounds needed for a 99% chance of a good split, capped at `50 n^2`.
pub fn default_repeats(profile: &SolutionProfile) -> u64 {
    let n = profile.n() as f64;
    let q = split_probability(profile);
    ((100f64.ln() / q).ceil()).clamp(1.0, 50.0 * n * n) as u64
}

/// Meet-in-the-middle restricted to solutions with profile `pi`.
///
/// Each round draws a random equal split `A, B` of the coordinates and
/// matches arrangements of the half profiles on each side.
pub fn unbalanced_sb<R: Rng + ?Sized>(
    instance: &Instance,
    profile: &SolutionProfile,
    rng: &mut R,
    repeats: u64,
) -> Result<SolverReport> {
    check_profile(instance, profile)?;
    let mut stats = SolverStats { profiles: 1, ..Default::default() };
    if profile.is_zero_only() {
        return Ok(SolverReport::new("unbalanced", Outcome::NoSolutionFound, stats));
    }
    let (pa, pb) = half_profiles(profile);
    for counts in [&pa, &pb] {
        let size = multinomial(counts) as f64;
        if size > LIST_GUARD {
            return Err(Error::GuardExceeded { size, guard: LIST_GUARD });
        }
    }
    let vals = instance.coeff_set().values();
    let sa = multiset_permutations(&pa, &vals);
    let sb = multiset_permutations(&pb, &vals);
    let n = instance.n();
    let na = n.div_ceil(2);
    let mut perm: Vec<usize> = (0..n).collect();
    for _ in 0..repeats {
        stats.rounds += 1;
        perm.shuffle(rng);
        let (ia, ib) = perm.split_at(na);
        let xa: Vec<i64> = ia.iter().map(|&i| instance.x()[i]).collect();
        let xb: Vec<i64> = ib.iter().map(|&i| instance.x()[i]).collect();
        let l = SumList::of_vectors(&xa, &sa);
        let r = SumList::of_vectors(&xb, &sb);
        stats.saw_list(l.len().max(r.len()));
        if let Some((a, b)) = meet(&l, &r, Combine::Sum, 0) {
            stats.candidates += 1;
            let mut c = vec![0; n];
            for (k, &i) in ia.iter().enumerate() {
                c[i] = sa[a as usize][k];
            }
            for (k, &i) in ib.iter().enumerate() {
                c[i] = sb[b as usize][k];
            }
            debug_assert!(is_solution(instance, &c).unwrap());
            return Ok(SolverReport::new("unbalanced", Outcome::Solved(Solution::new(c)), stats));
        }
    }
    Ok(SolverReport::new("unbalanced", Outcome::NoSolutionFound, stats))
}

/// Runs [`unbalanced_sb`] on every nonzero profile, largest profile
/// classes first. Exact up to the per-profile failure probability.
pub fn solve_unbalanced<R: Rng + ?Sized>(instance: &Instance, rng: &mut R) -> Result<SolverReport> {
    let mut profiles: Vec<SolutionProfile> = enumerate_profiles(instance.n(), instance.coeff_set(), ProfileFilter::All)
        .filter(|p| !p.is_zero_only())
        .collect();
    profiles.sort_by(|a, b| b.ln_size().partial_cmp(&a.ln_size()).unwrap());
    let tasks: Vec<Task<'_>> = profiles
        .into_iter()
        .map(|profile| Task {
            repeats: default_repeats(&profile),
            run: Box::new(move |rng, reps| unbalanced_sb(instance, &profile, rng, reps)),
        })
        .collect();
    sweep::run("unbalanced", &tasks, rng)
}

pub(crate) fn check_profile(instance: &Instance, profile: &SolutionProfile) -> Result<()> {
    if profile.coeff_set() != instance.coeff_set() {
        return Err(Error::InvalidParameter(format!(
            "profile is over {} but the instance uses {}",
            profile.coeff_set(),
            instance.coeff_set()
        )));
    }
    if profile.n() != instance.n() {
        return Err(Error::LengthMismatch { expected: instance.n(), got: profile.n() });
    }
    Ok(())
}
