//! Exhaustive reference implementations, used to test every other solver.

use crate::coeff::CoefficientSet;
use crate::error::{Error, Result};
use crate::instance::{Instance, Solution};
use crate::mitm::Combine;
use crate::report::{Outcome, SolverReport, SolverStats};
use crate::Sum;

/// Largest search space any oracle will enumerate.
pub const GUARD: f64 = 1e8;

pub(crate) fn check_guard(size: f64) -> Result<()> {
    if size > GUARD {
        Err(Error::GuardExceeded { size, guard: GUARD })
    } else {
        Ok(())
    }
}

/// Walks `C^n` in lexicographic order (last coordinate fastest), keeping
/// `c . x` up to date incrementally. `visit` returns `false` to stop.
fn walk(instance: &Instance, mut visit: impl FnMut(&[i64], Sum) -> bool) -> Result<()> {
    let n = instance.n();
    let vals = instance.coeff_set().values();
    check_guard((vals.len() as f64).powi(n as i32))?;
    let x = instance.x();
    let k = vals.len();
    let mut idx = vec![0usize; n];
    let mut c = vec![vals[0]; n];
    let mut sum: Sum = x.iter().map(|&v| v as Sum * vals[0] as Sum).sum();
    loop {
        if !visit(&c, sum) {
            return Ok(());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            let old = c[i];
            if idx[i] + 1 < k {
                idx[i] += 1;
            } else {
                idx[i] = 0;
            }
            c[i] = vals[idx[i]];
            sum += x[i] as Sum * (c[i] - old) as Sum;
            if idx[i] != 0 {
                break;
            }
        }
    }
}

fn is_nonzero(c: &[i64]) -> bool {
    c.iter().any(|&z| z != 0)
}

/// Lexicographically first solution, or a certified `NoSolutionFound`.
pub fn brute_force_solve(instance: &Instance) -> Result<SolverReport> {
    let mut found = None;
    let mut visited = 0u64;
    walk(instance, |c, s| {
        visited += 1;
        if s == 0 && is_nonzero(c) {
            found = Some(c.to_vec());
            return false;
        }
        true
    })?;
    let outcome = match found {
        Some(c) => Outcome::Solved(Solution::new(c)),
        None => Outcome::NoSolutionFound,
    };
    Ok(SolverReport::new("oracle", outcome, SolverStats { rounds: 1, max_list: visited, ..Default::default() }))
}

pub fn count_solutions(instance: &Instance) -> Result<u64> {
    let mut count = 0;
    walk(instance, |c, s| {
        if s == 0 && is_nonzero(c) {
            count += 1;
        }
        true
    })?;
    Ok(count)
}

/// Up to `limit` solutions in lexicographic order.
pub fn all_solutions(instance: &Instance, limit: usize) -> Result<Vec<Solution>> {
    let mut out = Vec::new();
    walk(instance, |c, s| {
        if out.len() >= limit {
            return false;
        }
        if s == 0 && is_nonzero(c) {
            out.push(Solution::new(c.to_vec()));
        }
        true
    })?;
    Ok(out)
}

/// A solution with the fewest nonzero entries whose first nonzero entry is
/// positive, lexicographically first among those.
pub fn min_support_solution(instance: &Instance) -> Result<Option<Solution>> {
    let mut best: Option<(usize, Vec<i64>)> = None;
    walk(instance, |c, s| {
        if s == 0 && c.iter().find(|&&z| z != 0).is_some_and(|&z| z > 0) {
            let support = c.iter().filter(|&&z| z != 0).count();
            if best.as_ref().is_none_or(|(b, _)| support < *b) {
                best = Some((support, c.to_vec()));
            }
        }
        true
    })?;
    Ok(best.map(|(_, c)| Solution::new(c)))
}

/// All pairs `(a, b)` with `a_i` in `left[i]`, `b_i` in `right[i]` and
/// `combine(a, b) = c`. Iterates the product of the left alphabets.
pub fn enumerate_pairs(
    c: &[i64],
    left: &[Vec<i64>],
    right: &[Vec<i64>],
    combine: Combine,
) -> Result<Vec<(Vec<i64>, Vec<i64>)>> {
    let n = c.len();
    if left.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: left.len() });
    }
    if right.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: right.len() });
    }
    check_guard(left.iter().map(|a| a.len() as f64).product())?;
    if left.iter().any(|a| a.is_empty()) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let a: Vec<i64> = (0..n).map(|i| left[i][idx[i]]).collect();
        let b: Vec<i64> = (0..n)
            .map(|i| match combine {
                Combine::Sum => c[i] - a[i],
                Combine::Difference => a[i] - c[i],
            })
            .collect();
        if (0..n).all(|i| right[i].contains(&b[i])) {
            out.push((a, b));
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < left[i].len() {
                break;
            }
            idx[i] = 0;
        }
    }
}

/// First `(i, j)` in row-major order with `a[i] - b[j]` entrywise in `band`.
pub fn brute_force_compatible_pair(a: &[Vec<i64>], b: &[Vec<i64>], band: CoefficientSet) -> Option<(usize, usize)> {
    (0..a.len())
        .flat_map(|i| (0..b.len()).map(move |j| (i, j)))
        .find(|&(i, j)| a[i].iter().zip(&b[j]).all(|(&u, &v)| band.contains(u - v)))
}

/// Like [`brute_force_compatible_pair`] within one list, skipping pairs of
/// equal vectors.
pub fn brute_force_distinct_compatible_pair(list: &[Vec<i64>], band: CoefficientSet) -> Option<(usize, usize)> {
    (0..list.len())
        .flat_map(|i| (0..list.len()).map(move |j| (i, j)))
        .find(|&(i, j)| list[i] != list[j] && list[i].iter().zip(&list[j]).all(|(&u, &v)| band.contains(u - v)))
}
