use serde::{Deserialize, Serialize};

use crate::coeff::CoefficientSet;
use crate::error::{Error, Result};
use crate::Sum;

/// A validated Subset Balancing instance `(x, C)`.
///
/// Every `|x_i|` is at most `2^62 / (d n)`, so `c . x` fits in an `i64` for
/// any `c` in `C^n`. Sums are still carried as `i128` internally since some
/// solvers combine vectors with entries outside `C`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct Instance {
    x: Vec<i64>,
    coeff_set: CoefficientSet,
}

/// Wire form; `n` is optional on input and checked against `x` when given.
#[derive(Serialize, Deserialize)]
struct RawInstance {
    #[serde(default)]
    n: Option<usize>,
    x: Vec<i64>,
    coeff_set: CoefficientSet,
}

impl TryFrom<RawInstance> for Instance {
    type Error = Error;
    fn try_from(raw: RawInstance) -> Result<Self> {
        if let Some(n) = raw.n {
            if n != raw.x.len() {
                return Err(Error::LengthMismatch { expected: n, got: raw.x.len() });
            }
        }
        Instance::new(raw.x, raw.coeff_set)
    }
}

impl From<Instance> for RawInstance {
    fn from(inst: Instance) -> Self {
        RawInstance { n: Some(inst.x.len()), x: inst.x, coeff_set: inst.coeff_set }
    }
}

impl Instance {
    pub fn new(x: Vec<i64>, coeff_set: CoefficientSet) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::InvalidInstance("x must be nonempty".into()));
        }
        if coeff_set.d == 0 {
            return Err(Error::InvalidInstance("coefficient bound d must be at least 1".into()));
        }
        let bound = Self::input_bound(x.len(), coeff_set.d);
        if let Some((index, &value)) = x.iter().enumerate().find(|(_, v)| v.unsigned_abs() > bound as u64) {
            return Err(Error::InputTooLarge { index, value, bound });
        }
        Ok(Self { x, coeff_set })
    }

    /// Largest admissible `|x_i|` for dimension `n` and bound `d`.
    pub fn input_bound(n: usize, d: u32) -> i64 {
        ((1u128 << 62) / (n as u128 * d as u128)) as i64
    }

    pub fn x(&self) -> &[i64] {
        &self.x
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn coeff_set(&self) -> CoefficientSet {
        self.coeff_set
    }

    pub fn dot(&self, c: &[i64]) -> Sum {
        dot(&self.x, c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInstance(e.to_string()))
    }
}

pub(crate) fn dot(x: &[i64], c: &[i64]) -> Sum {
    x.iter().zip(c).map(|(&a, &b)| a as Sum * b as Sum).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Solution {
    pub c: Vec<i64>,
}

impl Solution {
    pub fn new(c: Vec<i64>) -> Self {
        Self { c }
    }
}

/// Checks that `c` is nonzero, lies in `C^n` and satisfies `c . x = 0`.
///
/// Length mismatches and out-of-set coefficients are errors, not `false`.
pub fn is_solution(instance: &Instance, c: &[i64]) -> Result<bool> {
    if c.len() != instance.n() {
        return Err(Error::LengthMismatch { expected: instance.n(), got: c.len() });
    }
    let set = instance.coeff_set();
    if let Some((index, &value)) = c.iter().enumerate().find(|(_, &z)| !set.contains(z)) {
        return Err(Error::CoefficientOutOfSet { index, value, set });
    }
    Ok(c.iter().any(|&z| z != 0) && instance.dot(c) == 0)
}
