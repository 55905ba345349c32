//! Compatible-pair search between two lists of vectors in `{0,1,2}^d`.
//!
//! `a` and `b` are compatible when `a - b` lies in `[-1:1]^d`. A random
//! family of certificates `(L, R)` per block is drawn; `a` is attached to
//! every certificate with `a^{-1}(2)` inside `L` and `a^{-1}(0)` disjoint
//! from `R`, `b` symmetrically. A shared certificate proves compatibility,
//! so matching reduces to a hash lookup.

use std::collections::HashMap;

use rand::seq::{index, SliceRandom};
use rand::Rng;

use crate::analysis::binary_entropy;
use crate::error::{Error, Result};
use crate::oracle::GUARD;
use crate::par;

/// Largest number of certificates drawn per block.
pub const DRAW_GUARD: f64 = (1u64 << 22) as f64;

/// `c(eps)` without lower-order terms; `0 <= eps <= 1/4`.
pub fn c_certificate(eps: f64) -> Result<f64> {
    if !(0.0..=0.25).contains(&eps) {
        return Err(Error::InvalidParameter(format!("eps = {eps} must lie in [0, 1/4]")));
    }
    Ok(crate::analysis::certificate_exponent(eps))
}

/// Per-coordinate exponent of the candidate list size,
/// `H((l-e)/(1-e))(1-e) + H(l/(1/2+e))(1/2+e) - 2H(l) + K`.
pub fn c0_exponent(eps: f64, lambda: f64, k: f64) -> Result<f64> {
    if !(0.0..=0.25).contains(&eps) || lambda < eps - 1e-12 || lambda > 0.5 + eps + 1e-12 {
        return Err(Error::InvalidParameter(format!("need 0 <= eps <= 1/4 and eps <= lambda <= 1/2 + eps, got eps = {eps}, lambda = {lambda}")));
    }
    Ok(binary_entropy((lambda - eps) / (1.0 - eps)) * (1.0 - eps) + binary_entropy(lambda / (0.5 + eps)) * (0.5 + eps)
        - 2.0 * binary_entropy(lambda)
        + k)
}

/// `2H(lambda) - H(2(lambda - eps))`: enough certificates that a compatible
/// pair shares one with constant probability.
pub fn candidate_floor(eps: f64, lambda: f64) -> f64 {
    2.0 * binary_entropy(lambda) - binary_entropy(2.0 * (lambda - eps))
}

/// A certificate on one block, as bitmasks over the block's positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Certificate {
    pub l: u64,
    pub r: u64,
}

#[derive(Debug, Clone)]
pub struct CertificateScheme {
    pub d: usize,
    pub ell: usize,
    /// Coordinates of each block; blocks partition `0..d`.
    pub blocks: Vec<Vec<usize>>,
    pub lambda: f64,
    pub k: f64,
    /// Draws per block, `ceil(2^{K |U|})`.
    pub draws: usize,
    /// Distinct certificates per block, in order of first draw.
    pub certs: Vec<Vec<Certificate>>,
    /// Twos per block.
    pub twos_per_block: usize,
}

/// Default block count: one block up to 24 coordinates, otherwise the
/// smallest divisor of `d` giving blocks of at most 24 (or 1 if none).
pub fn default_ell(d: usize) -> usize {
    if d <= 24 {
        return 1;
    }
    (d.div_ceil(24)..=d).find(|&l| d.is_multiple_of(l) && d / l <= 64).unwrap_or(1)
}

/// Random equal partition of `[d]` into `ell` blocks plus certificate draws
/// with `lambda = 2 eps` and `K = candidate_floor + log2(d) / |U|`.
pub fn build_scheme<R: Rng + ?Sized>(d: usize, eps: f64, ell: usize, rng: &mut R) -> Result<CertificateScheme> {
    if d == 0 || ell == 0 || !d.is_multiple_of(ell) {
        return Err(Error::InvalidParameter(format!("{ell} blocks do not divide d = {d}")));
    }
    if !(0.0..=0.25).contains(&eps) {
        return Err(Error::InvalidParameter(format!("eps = {eps} must lie in [0, 1/4]")));
    }
    let u = d / ell;
    if u > 64 {
        return Err(Error::InvalidParameter(format!("blocks of {u} coordinates exceed 64; use more blocks")));
    }
    let size = (2.0 * eps * u as f64).round() as usize;
    if size == 0 && eps > 0.0 {
        return Err(Error::InvalidParameter(format!(
            "certificate sets round to empty for eps = {eps} on blocks of {u}; use larger d or ell = 1"
        )));
    }
    let lambda = size as f64 / u as f64;
    if lambda < eps - 1e-12 || lambda > 0.5 + eps {
        return Err(Error::InvalidParameter(format!("rounded lambda = {lambda} leaves [eps, 1/2 + eps]")));
    }
    let k = candidate_floor(eps, lambda) + (d as f64).log2() / u as f64;
    let draws_f = 2f64.powf(k * u as f64).ceil();
    if draws_f > DRAW_GUARD {
        return Err(Error::GuardExceeded { size: draws_f, guard: DRAW_GUARD });
    }
    let draws = draws_f as usize;
    let mut perm: Vec<usize> = (0..d).collect();
    perm.shuffle(rng);
    let blocks: Vec<Vec<usize>> = perm.chunks(u).map(|c| c.to_vec()).collect();
    let mask = |idx: index::IndexVec| idx.into_iter().fold(0u64, |m, i| m | 1 << i);
    let certs = (0..ell)
        .map(|_| {
            let mut seen = std::collections::HashSet::new();
            let mut out = Vec::new();
            for _ in 0..draws {
                let c = Certificate { l: mask(index::sample(rng, u, size)), r: mask(index::sample(rng, u, size)) };
                if seen.insert(c) {
                    out.push(c);
                }
            }
            out
        })
        .collect();
    let twos_per_block = (eps * u as f64).round() as usize;
    Ok(CertificateScheme { d, ell, blocks, lambda, k, draws, certs, twos_per_block })
}

/// Masks of the twos and zeros of `v` restricted to `block`.
fn block_masks(v: &[i64], block: &[usize]) -> (u64, u64) {
    let mut twos = 0;
    let mut zeros = 0;
    for (j, &i) in block.iter().enumerate() {
        match v[i] {
            2 => twos |= 1 << j,
            0 => zeros |= 1 << j,
            _ => {}
        }
    }
    (twos, zeros)
}

fn a_accepts(c: Certificate, twos: u64, zeros: u64) -> bool {
    twos & !c.l == 0 && zeros & c.r == 0
}

fn b_accepts(c: Certificate, twos: u64, zeros: u64) -> bool {
    twos & !c.r == 0 && zeros & c.l == 0
}

/// `v^{-1}(2)` inside `L` and `v^{-1}(0)` disjoint from `R` (0-based sets).
pub fn is_a_certificate(v: &[i64], l: &[usize], r: &[usize]) -> bool {
    v.iter().enumerate().all(|(i, &x)| (x != 2 || l.contains(&i)) && (x != 0 || !r.contains(&i)))
}

/// `v^{-1}(2)` inside `R` and `v^{-1}(0)` disjoint from `L`.
pub fn is_b_certificate(v: &[i64], l: &[usize], r: &[usize]) -> bool {
    is_a_certificate(v, r, l)
}

/// For every block and every pattern in `{0,1,2}^{U_i}` (base-3 index, first
/// block position most significant), the certificates accepting it.
#[derive(Debug, Clone)]
pub struct AuxSets {
    pub aux_a: Vec<Vec<Vec<u32>>>,
    pub aux_b: Vec<Vec<Vec<u32>>>,
}

pub fn build_aux_sets(scheme: &CertificateScheme) -> Result<AuxSets> {
    let u = scheme.d / scheme.ell;
    let patterns = 3f64.powi(u as i32);
    let work = patterns * scheme.certs.iter().map(|c| c.len()).max().unwrap_or(0) as f64;
    crate::oracle::check_guard(work)?;
    let patterns = patterns as usize;
    let mut aux_a = Vec::with_capacity(scheme.ell);
    let mut aux_b = Vec::with_capacity(scheme.ell);
    for certs in &scheme.certs {
        let mut la = Vec::with_capacity(patterns);
        let mut lb = Vec::with_capacity(patterns);
        for code in 0..patterns {
            let (twos, zeros) = decode_pattern(code, u);
            la.push((0..certs.len() as u32).filter(|&c| a_accepts(certs[c as usize], twos, zeros)).collect());
            lb.push((0..certs.len() as u32).filter(|&c| b_accepts(certs[c as usize], twos, zeros)).collect());
        }
        aux_a.push(la);
        aux_b.push(lb);
    }
    Ok(AuxSets { aux_a, aux_b })
}

fn decode_pattern(mut code: usize, u: usize) -> (u64, u64) {
    let mut twos = 0;
    let mut zeros = 0;
    for j in (0..u).rev() {
        match code % 3 {
            2 => twos |= 1 << j,
            0 => zeros |= 1 << j,
            _ => {}
        }
        code /= 3;
    }
    (twos, zeros)
}

/// Base-3 index of a block pattern, matching [`AuxSets`].
pub fn pattern_index(v: &[i64], block: &[usize]) -> usize {
    block.iter().fold(0, |acc, &i| acc * 3 + v[i] as usize)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CompatResult {
    pub pair: Option<(usize, usize)>,
    pub rounds: u64,
    /// Vectors skipped because some block did not carry its share of twos
    /// and ones.
    pub unbalanced_skips: u64,
    /// Vectors whose candidate emission hit the budget.
    pub budget_hits: u64,
    /// Certificate hits that were checked entrywise.
    pub candidates: u64,
}

fn validate(list: &[Vec<i64>], d: usize, twos: usize) -> Result<()> {
    for (i, v) in list.iter().enumerate() {
        if v.len() != d {
            return Err(Error::LengthMismatch { expected: d, got: v.len() });
        }
        if v.iter().any(|&x| !(0..=2).contains(&x)) {
            return Err(Error::Precondition(format!("vector {i} has entries outside {{0,1,2}}")));
        }
        let t = v.iter().filter(|&&x| x == 2).count();
        let o = v.iter().filter(|&&x| x == 1).count();
        if t != twos || o != d / 2 {
            return Err(Error::Precondition(format!(
                "vector {i} has {t} twos and {o} ones, expected {twos} and {}",
                d / 2
            )));
        }
    }
    Ok(())
}

fn compatible(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1)
}

struct Round<'s> {
    scheme: &'s CertificateScheme,
    budget: u64,
    ones_per_block: usize,
}

impl Round<'_> {
    fn balanced(&self, v: &[i64]) -> bool {
        self.scheme.blocks.iter().all(|b| {
            let t = b.iter().filter(|&&i| v[i] == 2).count();
            let o = b.iter().filter(|&&i| v[i] == 1).count();
            t == self.scheme.twos_per_block && o == self.ones_per_block
        })
    }

    /// Candidate tuples for `v`, at most `budget`. Second value: truncated.
    fn tuples(&self, v: &[i64], side_a: bool) -> (Vec<Vec<u32>>, bool) {
        let lists: Vec<Vec<u32>> = self
            .scheme
            .blocks
            .iter()
            .zip(&self.scheme.certs)
            .map(|(block, certs)| {
                let (twos, zeros) = block_masks(v, block);
                (0..certs.len() as u32)
                    .filter(|&c| {
                        let c = certs[c as usize];
                        if side_a {
                            a_accepts(c, twos, zeros)
                        } else {
                            b_accepts(c, twos, zeros)
                        }
                    })
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        if lists.iter().any(|l| l.is_empty()) {
            return (out, false);
        }
        let mut idx = vec![0usize; lists.len()];
        loop {
            if out.len() as u64 >= self.budget {
                return (out, true);
            }
            out.push(idx.iter().zip(&lists).map(|(&i, l)| l[i]).collect());
            let mut k = lists.len();
            loop {
                if k == 0 {
                    return (out, false);
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < lists[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }
}

/// Finds `(i, j)` with `a[i] - b[j]` in `[-1:1]^d`. Every vector must have
/// `round(eps d)` twos and `floor(d/2)` ones. With `distinct`, pairs of
/// equal vectors are skipped (used when `a` and `b` are the same list).
fn search<R: Rng + ?Sized>(
    a: &[Vec<i64>],
    b: &[Vec<i64>],
    eps: f64,
    distinct: bool,
    rng: &mut R,
    repeats: u64,
) -> Result<CompatResult> {
    let mut res = CompatResult::default();
    let Some(d) = a.first().or(b.first()).map(|v| v.len()) else {
        return Ok(res);
    };
    let twos = (eps * d as f64).round() as usize;
    validate(a, d, twos)?;
    validate(b, d, twos)?;
    if a.is_empty() || b.is_empty() {
        return Ok(res);
    }
    let ell = default_ell(d);
    for _ in 0..repeats {
        res.rounds += 1;
        let scheme = build_scheme(d, eps, ell, rng)?;
        let u = d / ell;
        let lambda = scheme.lambda;
        let c0 = c0_exponent(eps, lambda, scheme.k)?;
        let budget_f = 2f64.powf(c0 * d as f64) * 8.0 * (d * d) as f64;
        let budget = if budget_f >= GUARD { GUARD as u64 } else { budget_f.ceil() as u64 };
        let round = Round { scheme: &scheme, budget, ones_per_block: (d / 2) / ell };
        let _ = u;
        // Single-writer phase: index A by certificate tuple, keeping up to
        // two entries with different vectors so a self-search can skip b.
        let mut table: HashMap<Vec<u32>, (usize, Option<usize>)> = HashMap::new();
        for (i, v) in a.iter().enumerate() {
            if !round.balanced(v) {
                res.unbalanced_skips += 1;
                continue;
            }
            let (ts, cut) = round.tuples(v, true);
            res.budget_hits += cut as u64;
            for t in ts {
                match table.get_mut(&t) {
                    None => {
                        table.insert(t, (i, None));
                    }
                    Some((first, second)) => {
                        if second.is_none() && a[*first] != *v {
                            *second = Some(i);
                        }
                    }
                }
            }
        }
        // Read-only probing phase.
        let probe = par::map(b, |j, v| -> (Option<(usize, usize)>, u64, u64, u64) {
            if !round.balanced(v) {
                return (None, 1, 0, 0);
            }
            let (ts, cut) = round.tuples(v, false);
            let mut checked = 0;
            for t in ts {
                if let Some(&(first, second)) = table.get(&t) {
                    for i in [Some(first), second].into_iter().flatten() {
                        checked += 1;
                        if distinct && a[i] == *v {
                            continue;
                        }
                        if compatible(&a[i], v) {
                            return (Some((i, j)), 0, cut as u64, checked);
                        }
                    }
                }
            }
            (None, 0, cut as u64, checked)
        });
        for (hit, skip, cut, checked) in probe {
            res.unbalanced_skips += skip;
            res.budget_hits += cut;
            res.candidates += checked;
            if let Some(p) = hit {
                res.pair = Some(p);
                return Ok(res);
            }
        }
    }
    Ok(res)
}

pub fn compatibility_test<R: Rng + ?Sized>(
    a: &[Vec<i64>],
    b: &[Vec<i64>],
    eps: f64,
    rng: &mut R,
    repeats: u64,
) -> Result<CompatResult> {
    search(a, b, eps, false, rng, repeats)
}

/// Compatible pair of distinct vectors within one list.
pub fn compatible_distinct_pair<R: Rng + ?Sized>(list: &[Vec<i64>], eps: f64, rng: &mut R, repeats: u64) -> Result<CompatResult> {
    search(list, list, eps, true, rng, repeats)
}
