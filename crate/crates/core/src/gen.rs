use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::coeff::CoefficientSet;
use crate::error::{Error, Result};
use crate::instance::{Instance, Solution};
use crate::profile::SolutionProfile;

const PLANT_RETRIES: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum GenMode {
    /// Each `x_i` uniform in `[-w, w]`.
    UniformRange { w: i64 },
    /// Random `x` with a planted solution of the given profile. All entries,
    /// including the one solved for, lie in `[-w, w]`, and that entry is
    /// nonzero.
    Planted { profile: SolutionProfile, w: i64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub instance: Instance,
    pub planted: Option<Solution>,
}

pub fn gen_instance<R: Rng + ?Sized>(n: usize, coeff_set: CoefficientSet, mode: &GenMode, rng: &mut R) -> Result<Generated> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let check_w = |w: i64| {
        if w < 1 || w > Instance::input_bound(n, coeff_set.d) {
            Err(Error::InvalidParameter(format!("w = {w} is outside [1, {}]", Instance::input_bound(n, coeff_set.d))))
        } else {
            Ok(())
        }
    };
    match mode {
        GenMode::UniformRange { w } => {
            check_w(*w)?;
            let x = (0..n).map(|_| rng.gen_range(-w..=*w)).collect();
            Ok(Generated { instance: Instance::new(x, coeff_set)?, planted: None })
        }
        GenMode::Planted { profile, w } => {
            check_w(*w)?;
            if profile.coeff_set() != coeff_set || profile.n() != n {
                return Err(Error::InvalidParameter("profile does not match n and C".into()));
            }
            if profile.is_zero_only() {
                return Err(Error::InvalidParameter("planted profile must have a nonzero coefficient".into()));
            }
            plant(profile, *w, rng)
        }
    }
}

fn plant<R: Rng + ?Sized>(profile: &SolutionProfile, w: i64, rng: &mut R) -> Result<Generated> {
    let n = profile.n();
    let mut c: Vec<i64> = profile.pairs().flat_map(|(z, k)| std::iter::repeat_n(z, k)).collect();
    for _ in 0..PLANT_RETRIES {
        c.shuffle(rng);
        // Solve for a coordinate with the smallest nonzero |c_m| so the
        // division succeeds as often as possible.
        let min_abs = c.iter().filter(|&&z| z != 0).map(|z| z.abs()).min().unwrap();
        let candidates: Vec<usize> = (0..n).filter(|&i| c[i].abs() == min_abs).collect();
        let m = *candidates.choose(rng).unwrap();
        let mut x: Vec<i64> = (0..n).map(|_| rng.gen_range(-w..=w)).collect();
        x[m] = 0;
        let rest: i128 = x.iter().zip(&c).map(|(&a, &b)| a as i128 * b as i128).sum();
        if rest % c[m] as i128 != 0 {
            continue;
        }
        let xm = -rest / c[m] as i128;
        if xm == 0 || xm.abs() > w as i128 {
            continue;
        }
        x[m] = xm as i64;
        let instance = Instance::new(x, profile.coeff_set())?;
        debug_assert_eq!(instance.dot(&c), 0);
        return Ok(Generated { instance, planted: Some(Solution::new(c)) });
    }
    Err(Error::InfeasiblePlant(PLANT_RETRIES))
}
