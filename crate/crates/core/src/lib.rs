//! Exact solvers for Subset Balancing.
//!
//! Given integers `x_1..x_n` and a symmetric coefficient set `C`, find a
//! nonzero `c` in `C^n` with `c . x = 0`. The crate provides a brute-force
//! oracle, classic and profile-guided meet-in-the-middle, two solvers based on
//! the representation technique (with and without zero in `C`) and an Equal
//! Subset Sum solver built on a compatibility test between vector lists.
//!
//! Data parallelism (profile sweeps, rounds, Monte Carlo trials) uses rayon
//! behind the default `parallel` feature. Without it every loop runs
//! sequentially. Results never depend on the thread count: each task draws
//! its randomness from a seed derived from the caller's rng and its position.

pub mod analysis;
pub mod coeff;
pub mod compat;
pub mod error;
pub mod ess;
pub mod gen;
pub mod hashing;
pub mod instance;
pub mod mitm;
pub mod oracle;
pub mod par;
pub mod profile;
pub mod rep_with0;
pub mod rep_without0;
pub mod report;
pub mod rerandomize;
mod sweep;

pub use coeff::{CoeffKind, CoefficientSet};
pub use error::{Error, Result};
pub use instance::{is_solution, Instance, Solution};
pub use profile::{enumerate_profiles, is_eps_unbalanced, profile_of, ProfileFilter, SolutionProfile};
pub use report::{Outcome, SolverReport, SolverStats};

/// Integer type used for dot products and list sums.
pub type Sum = i128;
