use serde::{Deserialize, Serialize};

use crate::coeff::CoefficientSet;
use crate::error::{Error, Result};

/// Multiplicities `pi(z)` of each coefficient `z` in a vector of `C^n`.
///
/// `counts` is aligned with [`CoefficientSet::values`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SolutionProfile {
    coeff_set: CoefficientSet,
    counts: Vec<usize>,
}

impl SolutionProfile {
    pub fn new(coeff_set: CoefficientSet, counts: Vec<usize>) -> Result<Self> {
        if counts.len() != coeff_set.cardinality() {
            return Err(Error::LengthMismatch { expected: coeff_set.cardinality(), got: counts.len() });
        }
        Ok(Self { coeff_set, counts })
    }

    /// Builds a profile from `(z, pi(z))` pairs; missing values count zero.
    pub fn from_pairs(coeff_set: CoefficientSet, pairs: &[(i64, usize)]) -> Result<Self> {
        let mut counts = vec![0; coeff_set.cardinality()];
        for &(z, k) in pairs {
            let i = coeff_set
                .index_of(z)
                .ok_or(Error::CoefficientOutOfSet { index: 0, value: z, set: coeff_set })?;
            counts[i] += k;
        }
        Ok(Self { coeff_set, counts })
    }

    /// The profile closest to uniform: `n mod |C|` values get one extra,
    /// assigned from the middle of `C` outwards.
    pub fn near_balanced(coeff_set: CoefficientSet, n: usize) -> Self {
        let k = coeff_set.cardinality();
        let mut counts = vec![n / k; k];
        let mut order: Vec<usize> = (0..k).collect();
        let mid = (k as f64 - 1.0) / 2.0;
        order.sort_by(|&a, &b| (a as f64 - mid).abs().partial_cmp(&(b as f64 - mid).abs()).unwrap().then(a.cmp(&b)));
        for &i in order.iter().take(n % k) {
            counts[i] += 1;
        }
        Self { coeff_set, counts }
    }

    pub fn coeff_set(&self) -> CoefficientSet {
        self.coeff_set
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn n(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn count(&self, z: i64) -> usize {
        self.coeff_set.index_of(z).map_or(0, |i| self.counts[i])
    }

    /// Iterates `(z, pi(z))` over all of `C`.
    pub fn pairs(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.coeff_set.values().into_iter().zip(self.counts.iter().copied())
    }

    /// True when every coordinate is zero, so no vector with this profile
    /// can be a solution.
    pub fn is_zero_only(&self) -> bool {
        self.count(0) == self.n()
    }

    /// Natural log of the number of vectors with this profile.
    pub fn ln_size(&self) -> f64 {
        ln_multinomial(&self.counts)
    }

    /// `max_z |pi(z) - n/|C||`.
    pub fn imbalance(&self) -> f64 {
        let mean = self.n() as f64 / self.coeff_set.cardinality() as f64;
        self.counts.iter().map(|&k| (k as f64 - mean).abs()).fold(0.0, f64::max)
    }
}

/// Multiplicity vector of `c`; fails on values outside `C`.
pub fn profile_of(c: &[i64], coeff_set: CoefficientSet) -> Result<SolutionProfile> {
    let mut counts = vec![0; coeff_set.cardinality()];
    for (index, &z) in c.iter().enumerate() {
        let i = coeff_set.index_of(z).ok_or(Error::CoefficientOutOfSet { index, value: z, set: coeff_set })?;
        counts[i] += 1;
    }
    Ok(SolutionProfile { coeff_set, counts })
}

/// `pi` is eps-unbalanced if some `|pi(z) - n/|C|| > eps n` (strict).
pub fn is_eps_unbalanced(profile: &SolutionProfile, eps: f64) -> bool {
    profile.imbalance() > eps * profile.n() as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileFilter {
    All,
    EpsBalanced(f64),
    EpsUnbalanced(f64),
}

impl ProfileFilter {
    fn keep(&self, p: &SolutionProfile) -> bool {
        match *self {
            ProfileFilter::All => true,
            ProfileFilter::EpsBalanced(eps) => !is_eps_unbalanced(p, eps),
            ProfileFilter::EpsUnbalanced(eps) => is_eps_unbalanced(p, eps),
        }
    }
}

/// All profiles of length-`n` vectors over `C`, in reverse lexicographic
/// order of the count vectors, starting from `(n, 0, ..., 0)`.
pub fn enumerate_profiles(
    n: usize,
    coeff_set: CoefficientSet,
    filter: ProfileFilter,
) -> impl Iterator<Item = SolutionProfile> {
    let k = coeff_set.cardinality();
    let mut first = vec![0; k];
    first[0] = n;
    Compositions { current: Some(first) }
        .map(move |counts| SolutionProfile { coeff_set, counts })
        .filter(move |p| filter.keep(p))
}

struct Compositions {
    current: Option<Vec<usize>>,
}

impl Iterator for Compositions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        if k > 1 {
            if let Some(j) = (0..k - 1).rev().find(|&j| out[j] > 0) {
                let mut next = out.clone();
                let tail = next[k - 1];
                next[k - 1] = 0;
                next[j] -= 1;
                next[j + 1] = tail + 1;
                self.current = Some(next);
            }
        }
        Some(out)
    }
}

pub fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|i| (i as f64).ln()).sum()
}

pub fn ln_binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

pub fn ln_multinomial(counts: &[usize]) -> f64 {
    ln_factorial(counts.iter().sum()) - counts.iter().map(|&k| ln_factorial(k)).sum::<f64>()
}

/// Exact binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at each step.
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Exact multinomial coefficient, saturating at `u128::MAX`.
pub fn multinomial(counts: &[usize]) -> u128 {
    let mut total = 0;
    let mut acc: u128 = 1;
    for &k in counts {
        total += k;
        acc = acc.saturating_mul(binomial(total, k));
    }
    acc
}
