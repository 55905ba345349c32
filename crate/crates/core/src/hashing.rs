//! Modular filtering: random primes, residue-count dynamic programs and
//! enumeration of the vectors in one residue class.

use rand::Rng;

use crate::error::{Error, Result};
use crate::par;
use crate::Sum;

/// Largest DP table (entries) any filter will allocate.
pub const TABLE_GUARD: f64 = (1u64 << 25) as f64;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Uniformly random prime in `[p_max, 2 p_max]`.
pub fn sample_prime<R: Rng + ?Sized>(p_max: u64, rng: &mut R) -> Result<u64> {
    if p_max < 2 {
        return Err(Error::InvalidParameter(format!("p_max = {p_max} must be at least 2")));
    }
    if p_max > 1 << 62 {
        return Err(Error::InvalidParameter(format!("p_max = {p_max} exceeds 2^62")));
    }
    loop {
        let p = rng.gen_range(p_max..=2 * p_max);
        if is_prime(p) {
            return Ok(p);
        }
    }
}

pub(crate) fn residue(v: Sum, p: u64) -> u64 {
    v.rem_euclid(p as Sum) as u64
}

fn check_table(entries: f64) -> Result<()> {
    if entries > TABLE_GUARD {
        Err(Error::GuardExceeded { size: entries, guard: TABLE_GUARD })
    } else {
        Ok(())
    }
}

/// Result of enumerating one residue class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResidueClass {
    Complete(Vec<Vec<i64>>),
    /// The class holds more than the cap; nothing was materialized.
    CapExceeded { size: u64 },
}

/// Counts, for every suffix of the coordinates and every residue mod `p`,
/// the vectors over per-coordinate alphabets whose suffix dot product with
/// `x` has that residue. Counts saturate at `u64::MAX`.
#[derive(Debug, Clone)]
pub struct ResidueDp {
    saturated: bool,
    p: u64,
    alphabets: Vec<Vec<i64>>,
    contrib: Vec<Vec<u64>>,
    counts: Vec<u64>,
}

impl ResidueDp {
    pub fn build(x: &[i64], alphabets: &[Vec<i64>], p: u64) -> Result<Self> {
        if alphabets.len() != x.len() {
            return Err(Error::LengthMismatch { expected: x.len(), got: alphabets.len() });
        }
        if p == 0 {
            return Err(Error::InvalidParameter("modulus must be positive".into()));
        }
        let n = x.len();
        check_table((n as f64 + 1.0) * p as f64)?;
        let pu = p as usize;
        let contrib: Vec<Vec<u64>> = alphabets
            .iter()
            .zip(x)
            .map(|(alpha, &xi)| alpha.iter().map(|&a| residue(a as Sum * xi as Sum, p)).collect())
            .collect();
        let mut counts = vec![0u64; (n + 1) * pu];
        counts[n * pu] = 1;
        for i in (0..n).rev() {
            let (head, tail) = counts.split_at_mut((i + 1) * pu);
            let next = &tail[..pu];
            let cur = &mut head[i * pu..];
            for &c in &contrib[i] {
                let c = c as usize;
                // cur[r] += next[r - c mod p]
                for (r, slot) in cur.iter_mut().enumerate() {
                    let src = if r >= c { r - c } else { r + pu - c };
                    *slot = slot.saturating_add(next[src]);
                }
            }
        }
        let saturated = counts.contains(&u64::MAX);
        Ok(Self { saturated, p, alphabets: alphabets.to_vec(), contrib, counts })
    }

    /// True when some count was clamped at `u64::MAX`.
    pub fn saturated(&self) -> bool {
        self.saturated
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn at(&self, i: usize, r: u64) -> u64 {
        self.counts[i * self.p as usize + r as usize]
    }

    /// Number of vectors whose dot product is `r` mod `p` (saturating).
    pub fn count(&self, r: u64) -> u64 {
        self.at(0, r % self.p)
    }

    /// All vectors in residue class `r`, in lexicographic order of the
    /// alphabets, unless the class exceeds `cap`.
    pub fn enumerate(&self, r: u64, cap: u64) -> ResidueClass {
        let r = r % self.p;
        let size = self.count(r);
        if size > cap {
            return ResidueClass::CapExceeded { size };
        }
        let mut out = Vec::with_capacity(size as usize);
        let mut cur = Vec::with_capacity(self.alphabets.len());
        self.walk(0, r, &mut cur, &mut out);
        ResidueClass::Complete(out)
    }

    fn walk(&self, i: usize, r: u64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == self.alphabets.len() {
            out.push(cur.clone());
            return;
        }
        for (k, &a) in self.alphabets[i].iter().enumerate() {
            let rest = (r + self.p - self.contrib[i][k]) % self.p;
            if self.at(i + 1, rest) > 0 {
                cur.push(a);
                self.walk(i + 1, rest, cur, out);
                cur.pop();
            }
        }
    }
}

pub fn build_dp(x: &[i64], alphabets: &[Vec<i64>], p: u64) -> Result<ResidueDp> {
    ResidueDp::build(x, alphabets, p)
}

pub fn enumerate_residue_class(dp: &ResidueDp, r: u64, cap: u64) -> ResidueClass {
    dp.enumerate(r, cap)
}

/// `ceil(8 n^2 * space / p_max)`, the list size at which a round gives up.
pub fn round_cap(n: usize, space: f64, p_max: u64) -> u64 {
    let cap = (8.0 * (n * n) as f64 * space / p_max.max(1) as f64).ceil();
    if cap >= u64::MAX as f64 {
        u64::MAX
    } else {
        cap as u64
    }
}

/// Residue DP over `{0,1,2}^n` restricted to vectors with exactly `ones`
/// ones and `twos` twos.
#[derive(Debug, Clone)]
pub struct WeightedResidueDp {
    p: u64,
    n: usize,
    ones: usize,
    twos: usize,
    xm: Vec<u64>,
    counts: Vec<u64>,
}

impl WeightedResidueDp {
    pub fn build(x: &[i64], ones: usize, twos: usize, p: u64) -> Result<Self> {
        let n = x.len();
        if ones + twos > n {
            return Err(Error::InvalidParameter(format!("{ones} ones and {twos} twos do not fit in {n} coordinates")));
        }
        if p == 0 {
            return Err(Error::InvalidParameter("modulus must be positive".into()));
        }
        check_table((n as f64 + 1.0) * (ones as f64 + 1.0) * (twos as f64 + 1.0) * p as f64)?;
        let xm: Vec<u64> = x.iter().map(|&v| residue(v as Sum, p)).collect();
        let mut dp = Self { p, n, ones, twos, xm, counts: Vec::new() };
        dp.counts = vec![0; (n + 1) * (ones + 1) * (twos + 1) * p as usize];
        let base = dp.idx(n, 0, 0, 0);
        dp.counts[base] = 1;
        let pu = p as usize;
        for i in (0..n).rev() {
            let x1 = dp.xm[i] as usize;
            let x2 = (2 * dp.xm[i] % p) as usize;
            for k1 in 0..=ones {
                for k2 in 0..=twos {
                    if k1 + k2 > n - i {
                        continue;
                    }
                    let dst = dp.idx(i, k1, k2, 0);
                    for r in 0..pu {
                        let mut v = dp.counts[dp.idx(i + 1, k1, k2, r as u64)];
                        if k1 > 0 {
                            let src = (r + pu - x1) % pu;
                            v = v.saturating_add(dp.counts[dp.idx(i + 1, k1 - 1, k2, src as u64)]);
                        }
                        if k2 > 0 {
                            let src = (r + pu - x2) % pu;
                            v = v.saturating_add(dp.counts[dp.idx(i + 1, k1, k2 - 1, src as u64)]);
                        }
                        dp.counts[dst + r] = v;
                    }
                }
            }
        }
        Ok(dp)
    }

    fn idx(&self, i: usize, k1: usize, k2: usize, r: u64) -> usize {
        ((i * (self.ones + 1) + k1) * (self.twos + 1) + k2) * self.p as usize + r as usize
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn count(&self, r: u64) -> u64 {
        self.counts[self.idx(0, self.ones, self.twos, r % self.p)]
    }

    pub fn enumerate(&self, r: u64, cap: u64) -> ResidueClass {
        let r = r % self.p;
        let size = self.count(r);
        if size > cap {
            return ResidueClass::CapExceeded { size };
        }
        let mut out = Vec::with_capacity(size as usize);
        let mut cur = Vec::with_capacity(self.n);
        self.walk(0, self.ones, self.twos, r, &mut cur, &mut out);
        ResidueClass::Complete(out)
    }

    fn walk(&self, i: usize, k1: usize, k2: usize, r: u64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == self.n {
            out.push(cur.clone());
            return;
        }
        let p = self.p;
        let options = [
            (0i64, k1, k2, r),
            (1, k1.wrapping_sub(1), k2, (r + p - self.xm[i]) % p),
            (2, k1, k2.wrapping_sub(1), (r + p - 2 * self.xm[i] % p) % p),
        ];
        for (a, n1, n2, rest) in options {
            if n1 > self.ones || n2 > self.twos {
                continue;
            }
            if self.counts[self.idx(i + 1, n1, n2, rest)] > 0 {
                cur.push(a);
                self.walk(i + 1, n1, n2, rest, cur, out);
                cur.pop();
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidueTrial {
    pub prime: u64,
    /// Fraction of residues `r` mod `p` with `|G ∩ r| >= |G| / (4 p_max)`
    /// and `|Y ∩ r| <= (|Y| / p_max) * y_slack`.
    pub good_fraction: f64,
    /// Unordered pairs of distinct elements of `G` congruent mod `p`.
    pub colliding_pairs: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidueStats {
    pub trials: Vec<ResidueTrial>,
    pub median_good_fraction: f64,
    pub mean_colliding_pairs: f64,
}

/// Monte Carlo estimate of how many residue classes mod a random prime in
/// `[p_max, 2 p_max]` are good for a set `G` inside a superset `Y`.
///
/// `y_slack` is the polynomial factor allowed on top of the expected load
/// `|Y| / p_max` of a class.
pub fn good_residue_fraction<R: Rng + ?Sized>(
    g: &[Sum],
    y: &[Sum],
    p_max: u64,
    y_slack: f64,
    trials: usize,
    rng: &mut R,
) -> Result<ResidueStats> {
    if trials == 0 {
        return Err(Error::InvalidParameter("at least one trial is required".into()));
    }
    check_table(2.0 * p_max as f64)?;
    let master: u64 = rng.gen();
    let ids: Vec<u64> = (0..trials as u64).collect();
    let g_floor = g.len() as f64 / (4.0 * p_max as f64);
    let y_ceiling = y.len() as f64 / p_max as f64 * y_slack;
    let results = par::map(&ids, |_, &t| -> Result<ResidueTrial> {
        let mut trng = par::task_rng(master, t);
        let p = sample_prime(p_max, &mut trng)?;
        let mut gh = vec![0u32; p as usize];
        for &v in g {
            gh[residue(v, p) as usize] += 1;
        }
        let mut yh = vec![0u32; p as usize];
        for &v in y {
            yh[residue(v, p) as usize] += 1;
        }
        let good = gh.iter().zip(&yh).filter(|&(&a, &b)| a as f64 >= g_floor && a > 0 && b as f64 <= y_ceiling).count();
        let colliding = gh.iter().map(|&h| h as u64 * (h as u64).saturating_sub(1) / 2).sum();
        Ok(ResidueTrial { prime: p, good_fraction: good as f64 / p as f64, colliding_pairs: colliding })
    });
    let trials: Vec<ResidueTrial> = results.into_iter().collect::<Result<_>>()?;
    let mut fr: Vec<f64> = trials.iter().map(|t| t.good_fraction).collect();
    fr.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = if fr.len() % 2 == 1 { fr[fr.len() / 2] } else { (fr[fr.len() / 2 - 1] + fr[fr.len() / 2]) / 2.0 };
    let mean_colliding = trials.iter().map(|t| t.colliding_pairs as f64).sum::<f64>() / trials.len() as f64;
    Ok(ResidueStats { trials, median_good_fraction: median, mean_colliding_pairs: mean_colliding })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn primality_small_and_large() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
    }

    #[test]
    fn sampled_primes_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for pm in [2u64, 3, 10, 1000, 1 << 40] {
            for _ in 0..20 {
                let p = sample_prime(pm, &mut rng).unwrap();
                assert!(is_prime(p) && p >= pm && p <= 2 * pm);
            }
        }
        assert!(sample_prime(1, &mut rng).is_err());
    }

    #[test]
    fn dp_counts_partition_the_space() {
        let x = [3i64, -7, 11, 4];
        let alpha = vec![vec![0, 1, 2]; 4];
        let dp = ResidueDp::build(&x, &alpha, 7).unwrap();
        let total: u64 = (0..7).map(|r| dp.count(r)).sum();
        assert_eq!(total, 81);
        for r in 0..7 {
            let ResidueClass::Complete(vs) = dp.enumerate(r, u64::MAX) else { panic!() };
            assert_eq!(vs.len() as u64, dp.count(r));
            for v in vs {
                let s: i64 = v.iter().zip(&x).map(|(a, b)| a * b).sum();
                assert_eq!(s.rem_euclid(7) as u64, r);
            }
        }
        assert_eq!(dp.enumerate(0, 0), ResidueClass::CapExceeded { size: dp.count(0) });
    }

    #[test]
    fn weighted_dp_respects_counts() {
        let x = [5i64, 2, -3, 8, 1];
        let dp = WeightedResidueDp::build(&x, 2, 1, 5).unwrap();
        let total: u64 = (0..5).map(|r| dp.count(r)).sum();
        // choose the two position, then two ones among the rest
        assert_eq!(total, 5 * 6);
        for r in 0..5 {
            let ResidueClass::Complete(vs) = dp.enumerate(r, u64::MAX) else { panic!() };
            for v in &vs {
                assert_eq!(v.iter().filter(|&&a| a == 1).count(), 2);
                assert_eq!(v.iter().filter(|&&a| a == 2).count(), 1);
                let s: i64 = v.iter().zip(&x).map(|(a, b)| a * b).sum();
                assert_eq!(s.rem_euclid(5) as u64, r);
            }
        }
        assert!(WeightedResidueDp::build(&x, 5, 1, 5).is_err());
    }

    #[test]
    fn modulus_one_enumerates_everything() {
        let dp = ResidueDp::build(&[1, 2], &[vec![0, 1], vec![0, 1]], 1).unwrap();
        let ResidueClass::Complete(vs) = dp.enumerate(0, 10) else { panic!() };
        assert_eq!(vs, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn contiguous_range_is_all_good() {
        let g: Vec<Sum> = (0..1 << 12).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let st = good_residue_fraction(&g, &g, 1 << 10, 1.0, 9, &mut rng).unwrap();
        assert_eq!(st.trials.len(), 9);
        assert_eq!(st.median_good_fraction, 1.0);
    }

    #[test]
    fn multiples_of_the_prime_collide() {
        // Primes in [2, 4] are 2 and 3; multiples of 6 all land in class 0.
        let g: Vec<Sum> = (0..40).map(|i| i * 6).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let st = good_residue_fraction(&g, &g, 2, 2.0, 20, &mut rng).unwrap();
        for t in &st.trials {
            assert_eq!(t.colliding_pairs, 780);
            assert!((t.good_fraction - 1.0 / t.prime as f64).abs() < 1e-12);
        }
    }
}
