//! Entropy utilities and numerical evaluation of the runtime exponents.
//!
//! All exponents are base-2 and per coordinate, without polynomial factors.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::profile::{ln_factorial, SolutionProfile};
use crate::rep_with0::p_max_with0;
use crate::rep_without0::{catalog, count_pairs_shifted, good_factors, representation_counts, FactorPair};

/// Shannon entropy in bits, with `0 log 0 = 0`.
pub fn entropy(p: &[f64]) -> Result<f64> {
    if let Some(v) = p.iter().find(|&&v| v < 0.0 || v.is_nan()) {
        return Err(Error::InvalidParameter(format!("negative probability {v}")));
    }
    let total: f64 = p.iter().sum();
    if total > 1.0 + 1e-9 {
        return Err(Error::InvalidParameter(format!("probabilities sum to {total} > 1")));
    }
    Ok(p.iter().filter(|&&v| v > 0.0).map(|&v| -v * v.log2()).sum())
}

/// Binary entropy `H(p)`. Returns NaN outside `[0, 1]`; values within
/// `1e-12` of the interval are clamped.
pub fn binary_entropy(p: f64) -> f64 {
    let p = if (-1e-12..0.0).contains(&p) {
        0.0
    } else if p > 1.0 && p < 1.0 + 1e-12 {
        1.0
    } else {
        p
    };
    if !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    if p == 0.0 || p == 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

fn h_unchecked(p: &[f64]) -> f64 {
    if p.iter().any(|&v| v < -1e-12) {
        return f64::NAN;
    }
    p.iter().filter(|&&v| v > 0.0).map(|&v| -v * v.log2()).sum()
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizes a unimodal `f` on `[lo, hi]` by golden-section search.
fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    let x = (lo + hi) / 2.0;
    (x, f(x))
}

/// Grid search with spacing `step` on `[lo, hi]`, then golden-section
/// refinement on the two neighbouring cells. NaN values count as `-inf`.
fn grid_golden_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, step: f64) -> (f64, f64) {
    let g = |x: f64| {
        let v = f(x);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    let cells = ((hi - lo) / step).round() as usize;
    let mut best = (lo, g(lo));
    for i in 1..=cells {
        let x = (lo + i as f64 * step).min(hi);
        let v = g(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    let (a, b) = ((best.0 - step).max(lo), (best.0 + step).min(hi));
    let refined = golden_max(g, a, b, 1e-12);
    if refined.1 >= best.1 {
        refined
    } else {
        best
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pm2Optimum {
    pub value: f64,
    pub alpha0: f64,
    pub alpha1: f64,
}

/// Worst-case exponent for `[-2:2]`: the smaller of the unbalanced branch
/// `H(a0, a1, a1, t, t) / 2` and the balanced branch `log2(3)(1 - a0) - 2 a1`,
/// with `t = (1 - a0 - 2 a1) / 2`.
pub fn pm2_objective(alpha0: f64, alpha1: f64) -> f64 {
    let t = (1.0 - alpha0 - 2.0 * alpha1) / 2.0;
    let unbalanced = 0.5 * h_unchecked(&[alpha0, alpha1, alpha1, t, t]);
    let balanced = 3f64.log2() * (1.0 - alpha0) - 2.0 * alpha1;
    unbalanced.min(balanced)
}

pub fn optimize_pm2() -> Pm2Optimum {
    optimize_pm2_with_step(1e-3)
}

/// The objective is concave, so the inner maximization over `alpha1` and
/// the outer one over `alpha0` are both unimodal.
pub fn optimize_pm2_with_step(step: f64) -> Pm2Optimum {
    let inner = |a0: f64| grid_golden_max(|a1| pm2_objective(a0, a1), 0.0, ((1.0 - a0) / 2.0).max(0.0), step);
    let (alpha0, _) = grid_golden_max(|a0| inner(a0).1, 0.0, 1.0, step);
    let (alpha1, value) = inner(alpha0);
    Pm2Optimum { value, alpha0, alpha1 }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pm3Optimum {
    pub value: f64,
    pub beta: f64,
}

/// The two branches for `[±3]` at `beta = pi(2)/n`:
/// `H(q, b, q, q, b, q) / 2` with `q = (1 - 2b)/4`, and
/// `log2(6)/3 + 1/2 - 2b/3`.
pub fn pm3_branches(beta: f64) -> (f64, f64) {
    let q = (1.0 - 2.0 * beta) / 4.0;
    (0.5 * h_unchecked(&[q, beta, q, q, beta, q]), 6f64.log2() / 3.0 + 0.5 - 2.0 * beta / 3.0)
}

pub fn optimize_pm3() -> Pm3Optimum {
    optimize_pm3_with_step(1e-3)
}

pub fn optimize_pm3_with_step(step: f64) -> Pm3Optimum {
    let (beta, value) = grid_golden_max(
        |b| {
            let (u, v) = pm3_branches(b);
            u.min(v)
        },
        0.0,
        0.5,
        step,
    );
    Pm3Optimum { value, beta }
}

/// `c(eps) = (1-eps) H(eps/(1-eps)) + (1/2+eps) H(4eps/(1+2eps)) - H(2eps)`.
pub fn certificate_exponent(eps: f64) -> f64 {
    (1.0 - eps) * binary_entropy(eps / (1.0 - eps)) + (0.5 + eps) * binary_entropy(4.0 * eps / (1.0 + 2.0 * eps))
        - binary_entropy(2.0 * eps)
}

/// Exponent of the filtered ESS branch at `p = pi(0)/n`.
pub fn ess_branch_filtered(p: f64, eps: f64) -> f64 {
    1.0 + binary_entropy(2.0 * eps) / 2.0 + certificate_exponent(eps) - binary_entropy(2.0 * eps / (1.0 - p)) * (1.0 - p) - p
}

/// Exponent of the baseline ESS branch at `p = pi(0)/n`.
pub fn ess_branch_baseline(p: f64) -> f64 {
    (binary_entropy(p) + 1.0 - p) / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EssOptimum {
    pub value: f64,
    pub p: f64,
    pub eps: f64,
}

/// Best `eps` in `[0, 1/12)` for the filtered branch at `p`.
pub fn ess_best_eps(p: f64, step: f64) -> (f64, f64) {
    let (eps, neg) = grid_golden_max(|e| -ess_branch_filtered(p, e), 0.0, 1.0 / 12.0 - 1e-12, step);
    (eps, -neg)
}

pub fn optimize_ess() -> EssOptimum {
    optimize_ess_with_step(1e-3)
}

pub fn optimize_ess_with_step(step: f64) -> EssOptimum {
    let outer = |p: f64| ess_best_eps(p, step).1.min(ess_branch_baseline(p));
    let (p, value) = grid_golden_max(outer, 0.0, 1.0 - step, step);
    let (eps, _) = ess_best_eps(p, step);
    EssOptimum { value, p, eps }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AppendixBRow {
    pub d: u32,
    /// `(d+1) (d+1)^{-2/(3(2d+1))} (d!)^{-4/(3(2d+1))}`
    pub lhs_base: f64,
    /// `(2d+1)^{1/2}`, the meet-in-the-middle base.
    pub rhs_base: f64,
}

impl AppendixBRow {
    pub fn holds(&self) -> bool {
        self.lhs_base < self.rhs_base
    }
}

/// Tabulated `(d, lhs upper bound, rhs lower bound)` rows for `1 <= d <= 8`.
pub const BOUND_ROWS: [(u32, f64, f64); 8] = [
    (1, 1.715, 1.732),
    (2, 2.154, 2.236),
    (3, 2.492, 2.645),
    (4, 2.772, 3.0),
    (5, 3.013, 3.316),
    (6, 3.227, 3.360),
    (7, 3.419, 3.872),
    (8, 3.595, 4.123),
];

pub fn appendix_b_check(d: u32) -> Result<AppendixBRow> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be at least 1".into()));
    }
    let df = d as f64;
    let k = 3.0 * (2.0 * df + 1.0);
    let ln_lhs = (df + 1.0).ln() * (1.0 - 2.0 / k) - 4.0 / k * ln_factorial(d as usize);
    Ok(AppendixBRow { d, lhs_base: ln_lhs.exp(), rhs_base: (2.0 * df + 1.0).sqrt() })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Row {
    pub d: u32,
    pub variant: usize,
    pub c1: Vec<i64>,
    pub c2: Vec<i64>,
    /// `(|L| / |P|)^{1/n}` for a perfectly balanced profile.
    pub ratio_base: f64,
    pub ratio_exponent: f64,
    /// `|C|^{1/2}`.
    pub mim_base: f64,
    pub mim_exponent: f64,
    pub ratio_bound: f64,
    pub mim_bound: f64,
}

pub fn table1_check(d: u32, variant: usize) -> Result<Table1Row> {
    let row = catalog()
        .rows
        .iter()
        .find(|r| r.d == d)
        .ok_or_else(|| Error::InvalidParameter(format!("no table row for d = {d}")))?;
    let entry = row
        .variants
        .get(variant)
        .ok_or_else(|| Error::InvalidParameter(format!("no variant {variant} for d = {d}")))?;
    let f = good_factors(d, variant)?;
    let set = crate::coeff::CoefficientSet::no_zero(d)?;
    let k = set.cardinality() as f64;
    let reps = representation_counts(set, &f.c1, &f.c2);
    let ratio_exponent = ((f.c1.len() * f.c2.len()) as f64).log2() / 2.0
        - reps.iter().map(|&r| (r as f64).log2()).sum::<f64>() / k;
    Ok(Table1Row {
        d,
        variant,
        c1: f.c1,
        c2: f.c2,
        ratio_base: 2f64.powf(ratio_exponent),
        ratio_exponent,
        mim_base: k.sqrt(),
        mim_exponent: k.log2() / 2.0,
        ratio_bound: entry.ratio_bound,
        mim_bound: row.mim_bound,
    })
}

/// Predicted `log2(work) / n` of a solver on solutions with profile `pi`.
///
/// Ids: `oracle`, `mitm`, `unbalanced`, `rep0`, `repnz` (canonical
/// factors) and `ess` (which needs `eps`).
pub fn runtime_exponent(algorithm: &str, profile: &SolutionProfile, eps: Option<f64>) -> Result<f64> {
    let set = profile.coeff_set();
    let n = profile.n() as f64;
    let k = set.cardinality() as f64;
    if n == 0.0 {
        return Err(Error::InvalidParameter("empty profile".into()));
    }
    match algorithm {
        "oracle" => Ok(k.log2()),
        "mitm" => Ok(k.log2() / 2.0),
        "unbalanced" => {
            let p: Vec<f64> = profile.counts().iter().map(|&c| c as f64 / n).collect();
            Ok(entropy(&p)? / 2.0)
        }
        "rep0" => {
            if !set.has_zero() {
                return Err(Error::InvalidParameter("rep0 needs a set containing zero".into()));
            }
            let p_max = p_max_with0(profile, set.d) as f64;
            Ok((n * (set.d as f64 + 1.0).log2() - p_max.log2()) / n)
        }
        "repnz" => {
            if set.has_zero() {
                return Err(Error::InvalidParameter("repnz needs a set without zero".into()));
            }
            let f = FactorPair::canonical(set.d)?;
            let gamma = f.gamma_for_profile(profile)?;
            let count = count_pairs_shifted(profile, &f.c1, &f.c2)? as f64;
            let log_l = n / 2.0 * ((f.c1.len() * f.c2.len()) as f64).log2();
            let log_p = (count.log2() - gamma * n / 2.0).max(1.0);
            Ok((log_l - log_p) / n)
        }
        "ess" => {
            let eps = eps.ok_or_else(|| Error::InvalidParameter("ess needs eps".into()))?;
            if set != crate::coeff::CoefficientSet::full_range(1)? {
                return Err(Error::InvalidParameter("ess needs [-1:1]".into()));
            }
            Ok(ess_branch_filtered(profile.count(0) as f64 / n, eps))
        }
        other => Err(Error::InvalidParameter(format!("unknown algorithm {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn entropy_basics() {
        assert_abs_diff_eq!(binary_entropy(0.5), 1.0);
        assert_abs_diff_eq!(entropy(&[1.0 / 3.0; 3]).unwrap(), 3f64.log2(), epsilon = 1e-12);
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        assert!(entropy(&[-0.1, 0.5]).is_err());
        assert!(binary_entropy(1.5).is_nan());
    }

    #[test]
    fn pm2_boundary() {
        assert_abs_diff_eq!(pm2_objective(1.0, 0.0), 0.0);
    }

    #[test]
    fn certificate_exponent_values() {
        assert_eq!(certificate_exponent(0.0), 0.0);
        assert_abs_diff_eq!(certificate_exponent(0.04493), 0.1773, epsilon = 1e-3);
    }

    #[test]
    fn baseline_closed_form() {
        assert_abs_diff_eq!(ess_branch_baseline(0.22266), 0.77119, epsilon = 1e-4);
    }

    #[test]
    fn bound_small_rows() {
        let r = appendix_b_check(1).unwrap();
        assert_abs_diff_eq!(r.lhs_base, 2f64.powf(7.0 / 9.0), epsilon = 1e-12);
        assert_eq!(appendix_b_check(4).unwrap().rhs_base, 3.0);
    }
}
