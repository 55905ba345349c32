use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoeffKind {
    /// `[-d:d]`, zero included.
    #[serde(rename = "range")]
    FullRange,
    /// `[±d]`, zero excluded.
    #[serde(rename = "no_zero")]
    NoZero,
}

/// A symmetric coefficient set, either `[-d:d]` or `[±d]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoefficientSet {
    pub kind: CoeffKind,
    pub d: u32,
}

impl CoefficientSet {
    pub fn new(kind: CoeffKind, d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("coefficient bound d must be at least 1".into()));
        }
        Ok(Self { kind, d })
    }

    pub fn full_range(d: u32) -> Result<Self> {
        Self::new(CoeffKind::FullRange, d)
    }

    pub fn no_zero(d: u32) -> Result<Self> {
        Self::new(CoeffKind::NoZero, d)
    }

    pub fn has_zero(&self) -> bool {
        self.kind == CoeffKind::FullRange
    }

    pub fn cardinality(&self) -> usize {
        match self.kind {
            CoeffKind::FullRange => 2 * self.d as usize + 1,
            CoeffKind::NoZero => 2 * self.d as usize,
        }
    }

    pub fn contains(&self, z: i64) -> bool {
        let d = self.d as i64;
        (-d..=d).contains(&z) && (z != 0 || self.has_zero())
    }

    /// Elements in ascending order.
    pub fn values(&self) -> Vec<i64> {
        let d = self.d as i64;
        (-d..=d).filter(|&z| self.contains(z)).collect()
    }

    /// Position of `z` in [`values`](Self::values).
    pub fn index_of(&self, z: i64) -> Option<usize> {
        if !self.contains(z) {
            return None;
        }
        let shifted = (z + self.d as i64) as usize;
        match self.kind {
            CoeffKind::FullRange => Some(shifted),
            CoeffKind::NoZero if z > 0 => Some(shifted - 1),
            CoeffKind::NoZero => Some(shifted),
        }
    }
}

impl fmt::Display for CoefficientSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            CoeffKind::FullRange => write!(f, "[-{d}:{d}]", d = self.d),
            CoeffKind::NoZero => write!(f, "[±{}]", self.d),
        }
    }
}

impl std::str::FromStr for CoefficientSet {
    type Err = Error;

    /// Accepts `range:D`, `nozero:D`, `[-D:D]` and `[±D]`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse coefficient set {s:?}"));
        let s = s.trim();
        let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
        if let Some(rest) = s.strip_prefix("range:") {
            return Self::full_range(num(rest)?);
        }
        if let Some(rest) = s.strip_prefix("nozero:").or_else(|| s.strip_prefix("no_zero:")) {
            return Self::no_zero(num(rest)?);
        }
        let inner = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(bad)?;
        if let Some(rest) = inner.strip_prefix('±') {
            return Self::no_zero(num(rest)?);
        }
        let (lo, hi) = inner.split_once(':').ok_or_else(bad)?;
        let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
        let hi = num(hi)?;
        if lo != -(hi as i64) {
            return Err(bad());
        }
        Self::full_range(hi)
    }
}
