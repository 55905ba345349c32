//! Representation-technique solver for `C = [±d]`, `d >= 3`.
//!
//! `C` has no zero, so a solution cannot be split as a difference of two
//! vectors over a smaller set. Instead `C` is factored as a sumset
//! `C1 + C2 = C`, and `c` is represented as `a + b` with `a` over `C1` on the
//! first half of the coordinates and `C2` on the second (and `b` the other
//! way around).

use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Deserialize;

use crate::coeff::{CoeffKind, CoefficientSet};
use crate::error::{Error, Result};
use crate::hashing::{round_cap, sample_prime, ResidueClass, ResidueDp};
use crate::instance::{is_solution, Instance, Solution};
use crate::mitm::{self, check_profile, meet, meet_with, Combine, SumList, LIST_GUARD};
use crate::profile::{enumerate_profiles, is_eps_unbalanced, ProfileFilter, SolutionProfile};
use crate::rep_with0::{default_rounds, routing_eps};
use crate::report::{Outcome, SolverReport, SolverStats};
use crate::sweep::{self, Task};

#[derive(Debug, Clone, Deserialize)]
pub struct CatalogVariant {
    pub c1: Vec<i64>,
    pub c2: Vec<i64>,
    /// Tabulated upper bound on `(|L| / |P|)^{1/n}` for a balanced profile.
    pub ratio_bound: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct CatalogRow {
    pub d: u32,
    /// Tabulated lower bound on `|C|^{1/2}`.
    pub mim_bound: f64,
    pub variants: Vec<CatalogVariant>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct FactorCatalog {
    pub rows: Vec<CatalogRow>,
}

/// The factor table for `3 <= d <= 7`, loaded from `data/factor_catalog.json`.
pub fn catalog() -> &'static FactorCatalog {
    static CATALOG: OnceLock<FactorCatalog> = OnceLock::new();
    CATALOG.get_or_init(|| {
        serde_json::from_str(include_str!("../data/factor_catalog.json")).expect("factor catalog parses")
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorPair {
    pub c1: Vec<i64>,
    pub c2: Vec<i64>,
    /// Filtering exponent for a perfectly balanced profile.
    pub gamma: f64,
}

impl FactorPair {
    /// Checks `C1 + C2 = [±d]` and computes `gamma`.
    pub fn new(d: u32, mut c1: Vec<i64>, mut c2: Vec<i64>) -> Result<Self> {
        let set = CoefficientSet::no_zero(d)?;
        c1.sort_unstable();
        c1.dedup();
        c2.sort_unstable();
        c2.dedup();
        let mut sums: Vec<i64> = c1.iter().flat_map(|a| c2.iter().map(move |b| a + b)).collect();
        sums.sort_unstable();
        sums.dedup();
        if sums != set.values() {
            return Err(Error::InvalidParameter(format!("{c1:?} + {c2:?} is not {set}")));
        }
        let reps = representation_counts(set, &c1, &c2);
        let k = set.cardinality() as f64;
        let per_elem: f64 = reps.iter().map(|&r| (r as f64).log2()).sum::<f64>() / k;
        let gamma = k.log2() / 2.0 - ((c1.len() * c2.len()) as f64).log2() / 2.0 + per_elem;
        Ok(Self { c1, c2, gamma })
    }

    pub fn canonical(d: u32) -> Result<Self> {
        let d = check_d(d)?;
        let di = d as i64;
        let c2 = (-di..di).filter(|&z| z != 0 && z != -1).collect();
        Self::new(d, vec![0, 1], c2)
    }

    /// `log2 |C| / 2 - log2(|C1| |C2|) / 2 + log2 |P(pi)| / n`.
    pub fn gamma_for_profile(&self, profile: &SolutionProfile) -> Result<f64> {
        let set = profile.coeff_set();
        let count = count_pairs_shifted(profile, &self.c1, &self.c2)?;
        let n = profile.n() as f64;
        Ok((set.cardinality() as f64).log2() / 2.0 - ((self.c1.len() * self.c2.len()) as f64).log2() / 2.0
            + (count as f64).log2() / n)
    }
}

fn check_d(d: u32) -> Result<u32> {
    if d < 3 {
        return Err(Error::InvalidParameter(format!("coefficient factors need d >= 3, got {d}")));
    }
    Ok(d)
}

/// Variant 0 is the canonical pair; variants 1.. come from the catalog.
pub fn good_factors(d: u32, variant: usize) -> Result<FactorPair> {
    check_d(d)?;
    if variant == 0 {
        return FactorPair::canonical(d);
    }
    let row = catalog()
        .rows
        .iter()
        .find(|r| r.d == d)
        .ok_or_else(|| Error::InvalidParameter(format!("no catalogued factor variants for d = {d}")))?;
    let v = row
        .variants
        .get(variant)
        .ok_or_else(|| Error::InvalidParameter(format!("unknown factor variant {variant} for d = {d}")))?;
    FactorPair::new(d, v.c1.clone(), v.c2.clone())
}

/// Number of ways to write each `z` in `C` (ascending) as `a + b` with `a`
/// in `C1`, `b` in `C2`.
pub fn representation_counts(set: CoefficientSet, c1: &[i64], c2: &[i64]) -> Vec<u64> {
    set.values()
        .into_iter()
        .map(|z| c1.iter().filter(|&&a| c2.contains(&(z - a))).count() as u64)
        .collect()
}

/// `|P(c, C1, C2)| = prod_z reps(z)^{pi(z)}`, saturating.
pub fn count_pairs_shifted(profile: &SolutionProfile, c1: &[i64], c2: &[i64]) -> Result<u128> {
    let reps = representation_counts(profile.coeff_set(), c1, c2);
    let mut acc: u128 = 1;
    for (z, (&r, &k)) in profile.coeff_set().values().iter().zip(reps.iter().zip(profile.counts())) {
        if r == 0 {
            return Err(Error::InvalidParameter(format!("{z} has no representation in {c1:?} + {c2:?}")));
        }
        acc = acc.saturating_mul((r as u128).saturating_pow(k as u32));
    }
    Ok(acc)
}

/// Per-coordinate alphabets of the two lists: `C1` then `C2` for the left,
/// swapped for the right. The `C1` block covers `ceil(n/2)` coordinates.
pub fn shifted_alphabets(n: usize, factors: &FactorPair) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let h = n.div_ceil(2);
    let left = (0..n).map(|i| if i < h { factors.c1.clone() } else { factors.c2.clone() }).collect();
    let right = (0..n).map(|i| if i < h { factors.c2.clone() } else { factors.c1.clone() }).collect();
    (left, right)
}

fn require_no_zero(instance: &Instance) -> Result<u32> {
    match instance.coeff_set().kind {
        CoeffKind::NoZero => Ok(instance.coeff_set().d),
        CoeffKind::FullRange => Err(Error::InvalidParameter(format!(
            "this solver needs a coefficient set without zero, got {}",
            instance.coeff_set()
        ))),
    }
}

/// Samples two lists of random half-vectors, each of size
/// `ceil(|C|^{n/2} 2^{-eps n/2})`, and meets them. Succeeds with constant
/// probability per round when the instance has at least `2^{eps n}`
/// solutions.
pub fn many_solutions_sample<R: Rng + ?Sized>(
    instance: &Instance,
    eps: f64,
    rng: &mut R,
    repeats: u64,
) -> Result<SolverReport> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidParameter(format!("eps = {eps} must lie in (0, 1]")));
    }
    let n = instance.n();
    let vals = instance.coeff_set().values();
    let k = vals.len() as f64;
    let h = n.div_ceil(2);
    let shrink = 2f64.powf(-eps * n as f64 / 2.0);
    let size = |len: usize| (k.powi(len as i32) * shrink).ceil().max(1.0);
    let (sa, sb) = (size(h), size(n - h));
    if sa.max(sb) > LIST_GUARD {
        return Err(Error::GuardExceeded { size: sa.max(sb), guard: LIST_GUARD });
    }
    let (xa, xb) = instance.x().split_at(h);
    let mut stats = SolverStats { profiles: 1, ..Default::default() };
    let draw = |len: usize, count: f64, rng: &mut R| -> Vec<Vec<i64>> {
        (0..count as usize).map(|_| (0..len).map(|_| *vals.choose(rng).unwrap()).collect()).collect()
    };
    for _ in 0..repeats {
        stats.rounds += 1;
        let la = draw(h, sa, rng);
        let lb = draw(n - h, sb, rng);
        let l = SumList::of_vectors(xa, &la);
        let r = SumList::of_vectors(xb, &lb);
        stats.saw_list(l.len().max(r.len()));
        let nonzero = |a: u32, b: u32| la[a as usize].iter().chain(&lb[b as usize]).any(|&z| z != 0);
        if let Some((a, b)) = meet_with(&l, &r, Combine::Sum, 0, nonzero) {
            let mut c = la[a as usize].clone();
            c.extend_from_slice(&lb[b as usize]);
            debug_assert!(is_solution(instance, &c).unwrap());
            stats.candidates += 1;
            return Ok(SolverReport::new("many_solutions", Outcome::Solved(Solution::new(c)), stats));
        }
    }
    Ok(SolverReport::new("many_solutions", Outcome::NoSolutionFound, stats))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShiftedRound {
    Solved(Vec<i64>),
    Miss,
    CapExceeded,
}

/// One filtered round: left list in residue `r`, right list in `-r`, both
/// mod `p`, met under `Sum`.
pub fn shifted_round(instance: &Instance, factors: &FactorPair, p: u64, r: u64, cap: u64) -> Result<(ShiftedRound, u64)> {
    let n = instance.n();
    let (la, ra) = shifted_alphabets(n, factors);
    let dl = ResidueDp::build(instance.x(), &la, p)?;
    let dr = ResidueDp::build(instance.x(), &ra, p)?;
    let left = match dl.enumerate(r, cap) {
        ResidueClass::Complete(v) => v,
        ResidueClass::CapExceeded { size } => return Ok((ShiftedRound::CapExceeded, size)),
    };
    let right = match dr.enumerate((p - r % p) % p, cap) {
        ResidueClass::Complete(v) => v,
        ResidueClass::CapExceeded { size } => return Ok((ShiftedRound::CapExceeded, size)),
    };
    let len = left.len().max(right.len()) as u64;
    let l = SumList::of_vectors(instance.x(), &left);
    let rl = SumList::of_vectors(instance.x(), &right);
    // Every a + b lies in (C1 + C2)^n = C^n, which has no zero vector.
    Ok(match meet(&l, &rl, Combine::Sum, 0) {
        Some((a, b)) => {
            let c: Vec<i64> = left[a as usize].iter().zip(&right[b as usize]).map(|(u, v)| u + v).collect();
            debug_assert!(is_solution(instance, &c).unwrap());
            (ShiftedRound::Solved(c), len)
        }
        None => (ShiftedRound::Miss, len),
    })
}

/// Representation rounds for profile `pi` with the given factors. Each round
/// first tries the many-solutions sampler with `eps = gamma / 2`, then one
/// filtered round with `p_max = max(2, |P| 2^{-gamma n/2})`. When `gamma <= 0`
/// only the sampler runs, with `eps = 1/n`.
pub fn balanced_sb_without0<R: Rng + ?Sized>(
    instance: &Instance,
    profile: &SolutionProfile,
    factors: &FactorPair,
    rng: &mut R,
    repeats: u64,
) -> Result<SolverReport> {
    let d = require_no_zero(instance)?;
    check_d(d)?;
    check_profile(instance, profile)?;
    let factors = FactorPair::new(d, factors.c1.clone(), factors.c2.clone())?;
    let n = instance.n();
    let mut stats = SolverStats { profiles: 1, ..Default::default() };
    let gamma = factors.gamma_for_profile(profile)?;
    let count = count_pairs_shifted(profile, &factors.c1, &factors.c2)?;
    let p_max = (count as f64 * 2f64.powf(-gamma * n as f64 / 2.0)).floor().clamp(2.0, 1e18) as u64;
    let space: f64 = ((factors.c1.len() * factors.c2.len()) as f64).powf(n as f64 / 2.0);
    let cap = round_cap(n, space, p_max);
    let sampler_eps = if gamma > 0.0 { gamma / 2.0 } else { 1.0 / n as f64 };
    let mut filtered_rounds = 0;
    for _ in 0..repeats {
        let pre = many_solutions_sample(instance, sampler_eps, rng, 1)?;
        stats.absorb(&pre.stats);
        stats.profiles = 1;
        if pre.outcome.is_solved() {
            return Ok(SolverReport::new("repnz", pre.outcome, stats));
        }
        if gamma <= 0.0 {
            continue;
        }
        filtered_rounds += 1;
        let p = sample_prime(p_max, rng)?;
        let r = rng.gen_range(0..p);
        stats.last_prime = Some(p);
        let (res, len) = shifted_round(instance, &factors, p, r, cap)?;
        match res {
            ShiftedRound::Solved(c) => {
                stats.saw_list(len as usize);
                stats.candidates += 1;
                return Ok(SolverReport::new("repnz", Outcome::Solved(Solution::new(c)), stats));
            }
            ShiftedRound::Miss => stats.saw_list(len as usize),
            ShiftedRound::CapExceeded => stats.cap_hits += 1,
        }
    }
    let outcome = if filtered_rounds > 0 && stats.cap_hits == filtered_rounds {
        Outcome::RetryableFailure
    } else {
        Outcome::NoSolutionFound
    };
    Ok(SolverReport::new("repnz", outcome, stats))
}

/// Full solver for `[±d]`. For `d <= 2` no improvement over plain
/// meet-in-the-middle is known and [`mitm::classic_mitm`] is used.
pub fn solve_without0<R: Rng + ?Sized>(instance: &Instance, rng: &mut R) -> Result<SolverReport> {
    let d = require_no_zero(instance)?;
    if d <= 2 {
        let mut r = mitm::classic_mitm(instance)?;
        r.algorithm = "repnz".into();
        return Ok(r.with_note("not improvable: d <= 2 uses classic meet-in-the-middle"));
    }
    let set = instance.coeff_set();
    let n = instance.n();
    let eps = routing_eps(set);
    let factors = FactorPair::canonical(d)?;
    let mut profiles: Vec<SolutionProfile> = enumerate_profiles(n, set, ProfileFilter::All).collect();
    profiles.sort_by(|a, b| b.ln_size().partial_cmp(&a.ln_size()).unwrap());
    let tasks: Vec<Task<'_>> = profiles
        .into_iter()
        .map(|profile| {
            if is_eps_unbalanced(&profile, eps) {
                Task {
                    repeats: mitm::default_repeats(&profile),
                    run: Box::new(move |rng, reps| mitm::unbalanced_sb(instance, &profile, rng, reps)),
                }
            } else {
                let f = factors.clone();
                Task {
                    repeats: default_rounds(n),
                    run: Box::new(move |rng, reps| balanced_sb_without0(instance, &profile, &f, rng, reps)),
                }
            }
        })
        .collect();
    sweep::run("repnz", &tasks, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn nz(d: u32) -> CoefficientSet {
        CoefficientSet::no_zero(d).unwrap()
    }

    #[test]
    fn canonical_d3() {
        let f = good_factors(3, 0).unwrap();
        assert_eq!(f.c1, vec![0, 1]);
        assert_eq!(f.c2, vec![-3, -2, 1, 2]);
        let expected = 6f64.log2() / 2.0 - 1.5 + 1.0 / 3.0;
        assert!((f.gamma - expected).abs() < 1e-12);
        assert!((f.gamma - 0.12582).abs() < 1e-4);
    }

    #[test]
    fn catalog_variants() {
        let f = good_factors(4, 1).unwrap();
        assert_eq!(f.c1, vec![0, 1, 2]);
        assert_eq!(f.c2, vec![-4, -3, 1, 2]);
        assert!(good_factors(2, 0).is_err());
        assert!(good_factors(3, 1).is_err());
        assert!(good_factors(9, 1).is_err());
        assert!(good_factors(9, 0).is_ok());
        for row in &catalog().rows {
            for v in 0..row.variants.len() {
                assert!(good_factors(row.d, v).unwrap().gamma > 0.0);
            }
        }
    }

    #[test]
    fn sumset_is_checked() {
        assert!(FactorPair::new(3, vec![0, 1], vec![-3, 1, 2]).is_err());
    }

    #[test]
    fn pair_counts() {
        let f = good_factors(3, 0).unwrap();
        let bal = SolutionProfile::new(nz(3), vec![2; 6]).unwrap();
        assert_eq!(count_pairs_shifted(&bal, &f.c1, &f.c2).unwrap(), 16);
        let top = SolutionProfile::from_pairs(nz(3), &[(3, 5)]).unwrap();
        assert_eq!(count_pairs_shifted(&top, &f.c1, &f.c2).unwrap(), 1);
        let g = good_factors(5, 2).unwrap();
        let bal5 = SolutionProfile::new(nz(5), vec![1; 10]).unwrap();
        assert_eq!(count_pairs_shifted(&bal5, &g.c1, &g.c2).unwrap(), 144);
    }

    #[test]
    fn sampler_finds_dense_solutions() {
        let inst = Instance::new(vec![1, 1, -1, -1], nz(1)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let r = many_solutions_sample(&inst, 0.5, &mut rng, 20).unwrap();
        assert!(is_solution(&inst, &r.outcome.solution().unwrap().c).unwrap());
        assert!(many_solutions_sample(&inst, 0.0, &mut rng, 1).is_err());
    }

    #[test]
    fn no_matching_profile() {
        let inst = Instance::new(vec![1, 1, 1, 1, 1, 5], nz(3)).unwrap();
        let p = SolutionProfile::from_pairs(nz(3), &[(3, 6)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = balanced_sb_without0(&inst, &p, &good_factors(3, 0).unwrap(), &mut rng, 10).unwrap();
        // All-threes is not a solution; other profiles might be found by the
        // sampler, but any answer must verify.
        if let Some(s) = r.outcome.solution() {
            assert!(is_solution(&inst, &s.c).unwrap());
        }
    }

    #[test]
    fn tiny_cap_fires() {
        let inst = Instance::new(vec![0; 6], nz(3)).unwrap();
        let f = good_factors(3, 0).unwrap();
        let (res, _) = shifted_round(&inst, &f, 7, 0, 10).unwrap();
        assert_eq!(res, ShiftedRound::CapExceeded);
    }

    #[test]
    fn small_d_delegates() {
        let inst = Instance::new(vec![3, -3], nz(1)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let r = solve_without0(&inst, &mut rng).unwrap();
        assert_eq!(r.outcome.solution().unwrap().c, vec![1, 1]);
        assert!(r.note.is_some());
    }
}
