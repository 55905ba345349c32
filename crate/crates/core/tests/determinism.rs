use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sbal_core::gen::{gen_instance, GenMode};
use sbal_core::*;

fn run_all(seed: u64) -> Vec<SolverReport> {
    let cases = [
        (CoefficientSet::full_range(2).unwrap(), 9usize),
        (CoefficientSet::no_zero(3).unwrap(), 9),
        (CoefficientSet::full_range(1).unwrap(), 12),
    ];
    let mut out = Vec::new();
    for (k, (set, n)) in cases.into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed + k as u64);
        let inst = gen_instance(n, set, &GenMode::UniformRange { w: 5000 }, &mut rng).unwrap().instance;
        let r = match k {
            0 => rep_with0::solve_with0(&inst, &mut rng),
            1 => rep_without0::solve_without0(&inst, &mut rng),
            _ => ess::solve_ess(&inst, &mut rng),
        };
        out.push(r.unwrap());
    }
    out
}

#[test]
fn same_seed_same_report() {
    for seed in 0..5 {
        assert_eq!(run_all(seed), run_all(seed));
    }
}

#[cfg(feature = "parallel")]
#[test]
fn thread_count_does_not_change_reports() {
    let pool = |t| rayon::ThreadPoolBuilder::new().num_threads(t).build().unwrap();
    for seed in 0..5 {
        let one = pool(1).install(|| run_all(seed));
        let four = pool(4).install(|| run_all(seed));
        assert_eq!(one, four, "seed {seed}");
    }
}
