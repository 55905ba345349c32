use proptest::prelude::*;
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sbal_core::analysis::binary_entropy;
use sbal_core::compat::{
    build_aux_sets, build_scheme, c0_exponent, c_certificate, candidate_floor, compatibility_test, is_a_certificate,
    is_b_certificate,
};
use sbal_core::ess::{ess_solve_profile, good_pair_count, good_pair_count_exact, is_good_pair, solve_ess};
use sbal_core::gen::{gen_instance, GenMode};
use sbal_core::oracle::{brute_force_compatible_pair, brute_force_solve, enumerate_pairs};
use sbal_core::mitm::Combine;
use sbal_core::*;

fn ess_set() -> CoefficientSet {
    CoefficientSet::full_range(1).unwrap()
}

/// Random vector of length `d` with `twos` twos and `d/2` ones.
fn random_vector<R: Rng>(d: usize, twos: usize, rng: &mut R) -> Vec<i64> {
    let mut v = vec![0i64; d];
    for (k, i) in index::sample(rng, d, twos + d / 2).into_iter().enumerate() {
        v[i] = if k < twos { 2 } else { 1 };
    }
    v
}

/// A vector with the same counts as `a` and `a - b` in `[-1:1]^d`.
fn compatible_partner<R: Rng>(a: &[i64], rng: &mut R) -> Vec<i64> {
    let mut b = a.to_vec();
    let pick = |b: &[i64], val: i64, rng: &mut R| {
        let idx: Vec<usize> = (0..b.len()).filter(|&i| b[i] == val).collect();
        *idx.choose(rng).unwrap()
    };
    let two = pick(&b, 2, rng);
    let one = pick(&b, 1, rng);
    b.swap(two, one);
    let one = (0..b.len()).filter(|&i| b[i] == 1 && a[i] == 1).collect::<Vec<_>>();
    let zero = (0..b.len()).filter(|&i| b[i] == 0 && a[i] == 0).collect::<Vec<_>>();
    if let (Some(&i), Some(&j)) = (one.choose(rng), zero.choose(rng)) {
        b.swap(i, j);
    }
    b
}

#[test]
fn certificate_exponent_values() {
    assert_eq!(c_certificate(0.0).unwrap(), 0.0);
    assert!((c_certificate(0.04493).unwrap() - 0.1774).abs() < 2e-4);
    assert!(c_certificate(0.01).unwrap() < c_certificate(0.04493).unwrap());
    for k in 0..100 {
        let eps = 0.25 * k as f64 / 99.0;
        let lambda = 2.0 * eps;
        let via = c0_exponent(eps, lambda.min(0.5 + eps), binary_entropy(lambda)).unwrap();
        assert!((via - c_certificate(eps).unwrap()).abs() < 1e-9, "eps = {eps}");
    }
    for eps in [0.02, 0.04493, 0.08] {
        let lambda = 2.0 * eps;
        assert!(candidate_floor(eps, lambda) >= 0.0);
        assert!(candidate_floor(eps, lambda) <= binary_entropy(lambda) + 1e-12);
    }
}

#[test]
fn aux_sets_double_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let s = build_scheme(6, 1.0 / 6.0, 1, &mut rng).unwrap();
    let aux = build_aux_sets(&s).unwrap();
    let by_pattern: usize = aux.aux_a[0].iter().map(|l| l.len()).sum();
    let mut by_cert = 0;
    for c in 0..s.certs[0].len() as u32 {
        by_cert += aux.aux_a[0].iter().filter(|l| l.contains(&c)).count();
    }
    assert_eq!(by_pattern, by_cert);
}

#[test]
fn compat_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = vec![vec![2, 1, 1, 0]];
    assert_eq!(compatibility_test(&a, &[vec![1, 2, 0, 1]], 0.25, &mut rng, 10).unwrap().pair, Some((0, 0)));
    assert_eq!(compatibility_test(&a, &[vec![0, 1, 1, 2]], 0.25, &mut rng, 10).unwrap().pair, None);
    assert!(is_a_certificate(&[2, 1, 1, 0], &[0], &[1]));
    assert!(!is_a_certificate(&[2, 1, 1, 0], &[0], &[3]));
}

#[test]
fn compat_matches_oracle_on_random_lists() {
    let band = CoefficientSet::full_range(1).unwrap();
    let (mut positives, mut found) = (0, 0);
    for seed in 0..30u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a: Vec<Vec<i64>> = (0..64).map(|_| random_vector(12, 1, &mut rng)).collect();
        let mut b: Vec<Vec<i64>> = (0..64).map(|_| random_vector(12, 1, &mut rng)).collect();
        if seed % 2 == 0 {
            let partner = compatible_partner(&a[5], &mut rng);
            b[17] = partner;
        } else {
            a.truncate(4);
            b.truncate(4);
        }
        let truth = brute_force_compatible_pair(&a, &b, band).is_some();
        let got = compatibility_test(&a, &b, 1.0 / 12.0, &mut rng, 25).unwrap();
        if let Some((i, j)) = got.pair {
            assert!(a[i].iter().zip(&b[j]).all(|(u, v)| (u - v).abs() <= 1));
        }
        assert!(truth || got.pair.is_none());
        positives += truth as usize;
        found += (truth && got.pair.is_some()) as usize;
    }
    assert!(found * 10 >= positives * 9, "{found}/{positives}");
}

#[test]
fn good_pair_counts_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (neg, zero, pos) in [(3usize, 2usize, 3usize), (4, 0, 4), (2, 4, 2), (3, 1, 3)] {
        let n = neg + zero + pos;
        let mut c: Vec<i64> = [vec![-1; neg], vec![0; zero], vec![1; pos]].concat();
        c.shuffle(&mut rng);
        let profile = SolutionProfile::new(ess_set(), vec![neg, zero, pos]).unwrap();
        for eps_n in 0..=2usize.min(pos) {
            let alpha = vec![vec![0, 1, 2]; n];
            let pairs = enumerate_pairs(&c, &alpha, &alpha, Combine::Difference).unwrap();
            let good = pairs.iter().filter(|(a, b)| is_good_pair(a, b, &c, eps_n)).count();
            assert_eq!(good as u128, good_pair_count_exact(&profile, eps_n).unwrap(), "{c:?} eps_n={eps_n}");
            assert!(good as u128 <= good_pair_count(&profile, eps_n).unwrap());
        }
    }
}

#[test]
fn ess_profile_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let inst = Instance::new(vec![1, 4, 2, 3], ess_set()).unwrap();
    let p = SolutionProfile::new(ess_set(), vec![2, 0, 2]).unwrap();
    let r = ess_solve_profile(&inst, &p, 0, &mut rng, 1).unwrap();
    let c = r.outcome.solution().unwrap().c.clone();
    assert!(c == vec![1, 1, -1, -1] || c == vec![-1, -1, 1, 1]);
    let none = Instance::new(vec![1, 2, 4, 8], ess_set()).unwrap();
    assert_eq!(ess_solve_profile(&none, &p, 0, &mut rng, 5).unwrap().outcome, Outcome::NoSolutionFound);
}

#[test]
fn ess_planted_both_eps_paths() {
    let profile = SolutionProfile::new(ess_set(), vec![4, 4, 4]).unwrap();
    for eps_n in [0usize, 1] {
        let mut solved = 0;
        for seed in 0..20u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = gen_instance(12, ess_set(), &GenMode::Planted { profile: profile.clone(), w: 100_000 }, &mut rng).unwrap();
            let r = ess_solve_profile(&g.instance, &profile, eps_n, &mut rng, 30).unwrap();
            if let Some(s) = r.outcome.solution() {
                assert!(s.c.iter().all(|z| z.abs() <= 1));
                assert!(is_solution(&g.instance, &s.c).unwrap());
                solved += 1;
            }
        }
        assert!(solved >= 18, "eps_n = {eps_n}: {solved}/20");
    }
}

#[test]
fn ess_solver_batch() {
    let (mut solvable, mut agree) = (0, 0);
    for seed in 0..60u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 4 + seed as usize % 9;
        let inst = gen_instance(n, ess_set(), &GenMode::UniformRange { w: 3000 }, &mut rng).unwrap().instance;
        let truth = brute_force_solve(&inst).unwrap().outcome.is_solved();
        let r = solve_ess(&inst, &mut rng).unwrap();
        if let Some(s) = r.outcome.solution() {
            assert!(is_solution(&inst, &s.c).unwrap());
        }
        solvable += truth as usize;
        agree += (truth && r.outcome.is_solved()) as usize;
    }
    assert!(agree * 100 >= solvable * 95, "{agree}/{solvable}");
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let dup = Instance::new(vec![17, 5, 17, 40], ess_set()).unwrap();
    assert!(solve_ess(&dup, &mut rng).unwrap().outcome.is_solved());
    let pow = Instance::new((0..12).map(|i| 1i64 << i).collect(), ess_set()).unwrap();
    assert_eq!(solve_ess(&pow, &mut rng).unwrap().outcome, Outcome::NoSolutionFound);
}

proptest! {
    #[test]
    fn shared_certificate_implies_compatible(
        a in prop::collection::vec(0i64..=2, 8),
        b in prop::collection::vec(0i64..=2, 8),
        l in prop::collection::vec(0usize..8, 0..5),
        r in prop::collection::vec(0usize..8, 0..5),
    ) {
        if is_a_certificate(&a, &l, &r) && is_b_certificate(&b, &l, &r) {
            prop_assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= 1));
        }
    }
}
