//! Benchmark suites: generate a seeded corpus and run solvers over it.

use std::time::Instant;

use clap::ValueEnum;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sbal_core::gen::{gen_instance, GenMode};
use sbal_core::{analysis, ess, CoefficientSet, SolutionProfile};
use serde::Deserialize;

use crate::{route, solve_once, Algo, Fail};

/// Suite spec. Every field has a default, so `{}` is the empty suite.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Suite {
    #[serde(default = "default_n")]
    pub n_min: usize,
    #[serde(default = "default_n")]
    pub n_max: usize,
    #[serde(default)]
    pub sets: Vec<String>,
    #[serde(default)]
    pub algos: Vec<String>,
    /// Instances per `(n, C)`.
    #[serde(default = "default_count")]
    pub count: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_w")]
    pub w: i64,
    /// Plant a near-balanced solution instead of drawing `x` uniformly.
    #[serde(default)]
    pub planted: bool,
}

fn default_n() -> usize {
    8
}

fn default_count() -> u64 {
    1
}

fn default_w() -> i64 {
    1 << 20
}

const HEADER: [&str; 10] = ["algo", "n", "C", "seed", "outcome", "rounds", "prime", "|S|", "millis", "predicted_exponent"];

fn supports(algo: Algo, set: CoefficientSet) -> bool {
    match algo {
        Algo::Rep0 => set.has_zero(),
        Algo::Repnz => !set.has_zero(),
        Algo::Ess => set == CoefficientSet::full_range(1).expect("d = 1 is valid"),
        _ => true,
    }
}

fn algo_id(algo: Algo) -> &'static str {
    match algo {
        Algo::Auto => "auto",
        Algo::Mitm => "mitm",
        Algo::Unbalanced => "unbalanced",
        Algo::Rep0 => "rep0",
        Algo::Repnz => "repnz",
        Algo::Ess => "ess",
        Algo::Oracle => "oracle",
    }
}

/// Predicted `log2(work)/n` on the near-balanced profile.
fn predicted(algo: Algo, set: CoefficientSet, n: usize) -> Option<f64> {
    let algo = if algo == Algo::Auto { route(set) } else { algo };
    let profile = SolutionProfile::near_balanced(set, n);
    analysis::runtime_exponent(algo_id(algo), &profile, Some(ess::DEFAULT_EPS)).ok()
}

/// Runs the suite and returns CSV text. Without `timing` the output depends
/// only on the spec. Unsupported `(algo, C)` combinations are skipped.
pub fn run(suite: &Suite, timing: bool) -> Result<String, Fail> {
    let sets = suite.sets.iter().map(|s| s.parse::<CoefficientSet>()).collect::<Result<Vec<_>, _>>()?;
    let algos = suite
        .algos
        .iter()
        .map(|a| Algo::from_str(a, true).map_err(|_| Fail::input(format!("unknown algorithm {a:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER).map_err(Fail::input)?;
    for n in suite.n_min..=suite.n_max {
        for &set in &sets {
            for k in 0..suite.count {
                let seed = suite.seed.wrapping_add(k);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mode = if suite.planted {
                    GenMode::Planted { profile: SolutionProfile::near_balanced(set, n), w: suite.w }
                } else {
                    GenMode::UniformRange { w: suite.w }
                };
                let inst = gen_instance(n, set, &mode, &mut rng)?.instance;
                for &algo in &algos {
                    if !supports(algo, set) {
                        continue;
                    }
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let start = Instant::now();
                    let result = solve_once(&inst, algo, &mut rng);
                    let millis = start.elapsed().as_secs_f64() * 1e3;
                    let (outcome, rounds, prime, list) = match &result {
                        Ok(r) => (
                            r.outcome.label().to_string(),
                            r.stats.rounds.to_string(),
                            r.stats.last_prime.map(|p| p.to_string()).unwrap_or_default(),
                            r.stats.max_list.to_string(),
                        ),
                        Err(_) => ("error".to_string(), String::new(), String::new(), String::new()),
                    };
                    let record = [
                        algo_id(algo).to_string(),
                        n.to_string(),
                        set.to_string(),
                        seed.to_string(),
                        outcome,
                        rounds,
                        prime,
                        list,
                        if timing { format!("{millis:.3}") } else { String::new() },
                        predicted(algo, set, n).map(|e| format!("{e:.6}")).unwrap_or_default(),
                    ];
                    w.write_record(&record).map_err(Fail::input)?;
                }
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| Fail::input(e.to_string()))?;
    String::from_utf8(bytes).map_err(Fail::input)
}
