use rand::Rng;

use crate::instance::Instance;

/// Per-coordinate signs applied by [`rerandomize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignRecord {
    signs: Vec<i8>,
}

impl SignRecord {
    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Maps a solution of the sign-flipped instance back to the original.
    pub fn lift(&self, c: &[i64]) -> Vec<i64> {
        c.iter().zip(&self.signs).map(|(&z, &s)| z * s as i64).collect()
    }
}

/// Flips the sign of each `x_i` independently with probability 1/2.
///
/// Since `C` is symmetric, solutions correspond one-to-one via
/// [`SignRecord::lift`], and a solution with `k` nonzero entries of which
/// `m` are positive becomes one whose positive count is `Binomial(k, 1/2)`.
pub fn rerandomize<R: Rng + ?Sized>(instance: &Instance, rng: &mut R) -> (Instance, SignRecord) {
    let signs: Vec<i8> = (0..instance.n()).map(|_| if rng.gen::<bool>() { -1 } else { 1 }).collect();
    let x = instance.x().iter().zip(&signs).map(|(&v, &s)| v * s as i64).collect();
    let flipped = Instance::new(x, instance.coeff_set()).expect("sign flips keep the bound");
    (flipped, SignRecord { signs })
}
