use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sbal_core::gen::{gen_instance, GenMode};
use sbal_core::mitm::{self, classic_mitm, half_profiles, meet, multiset_permutations, unbalanced_sb, Combine, SumList};
use sbal_core::oracle::{self, brute_force_solve, count_solutions, enumerate_pairs};
use sbal_core::profile::multinomial;
use sbal_core::*;

fn any_set() -> impl Strategy<Value = CoefficientSet> {
    prop_oneof![
        Just(CoefficientSet::full_range(1).unwrap()),
        Just(CoefficientSet::full_range(2).unwrap()),
        Just(CoefficientSet::no_zero(1).unwrap()),
        Just(CoefficientSet::no_zero(2).unwrap()),
        Just(CoefficientSet::no_zero(3).unwrap()),
    ]
}

#[test]
fn oracle_examples() {
    let pm1 = CoefficientSet::no_zero(1).unwrap();
    let r1 = CoefficientSet::full_range(1).unwrap();
    let r2 = CoefficientSet::full_range(2).unwrap();
    assert!(!brute_force_solve(&Instance::new(vec![5, 7], pm1).unwrap()).unwrap().outcome.is_solved());
    assert!(brute_force_solve(&Instance::new(vec![3, -3], pm1).unwrap()).unwrap().outcome.is_solved());
    let five = Instance::new(vec![1, 2, 3, -4, -2], r2).unwrap();
    let all = oracle::all_solutions(&five, usize::MAX).unwrap();
    assert!(all.iter().any(|s| s.c == vec![2, -1, 0, 1, -2]));
    assert_eq!(count_solutions(&Instance::new(vec![1, 1], pm1).unwrap()).unwrap(), 2);
    assert_eq!(count_solutions(&Instance::new(vec![1, 2], pm1).unwrap()).unwrap(), 0);
    assert_eq!(count_solutions(&Instance::new(vec![1, 1, 1, 1], pm1).unwrap()).unwrap(), 6);
    let ms = oracle::min_support_solution(&Instance::new(vec![1, -1, 7], r1).unwrap()).unwrap().unwrap();
    assert_eq!(ms.c, vec![1, 1, 0]);
    assert!(oracle::min_support_solution(&Instance::new(vec![5, 9], r1).unwrap()).unwrap().is_none());
}

#[test]
fn enumerate_pairs_examples() {
    let b01 = vec![vec![0, 1]; 2];
    let pairs = enumerate_pairs(&[0, 0], &b01, &b01, Combine::Difference).unwrap();
    assert_eq!(
        pairs,
        vec![
            (vec![0, 0], vec![0, 0]),
            (vec![0, 1], vec![0, 1]),
            (vec![1, 0], vec![1, 0]),
            (vec![1, 1], vec![1, 1])
        ]
    );
    let shifted = enumerate_pairs(&[2], &[vec![0, 1]], &[vec![-3, -2, 1, 2]], Combine::Sum).unwrap();
    assert_eq!(shifted, vec![(vec![0], vec![2]), (vec![1], vec![1])]);
    let d2 = enumerate_pairs(&[1], &[vec![0, 1, 2]], &[vec![0, 1, 2]], Combine::Difference).unwrap();
    assert_eq!(d2, vec![(vec![1], vec![0]), (vec![2], vec![1])]);
}

#[test]
fn half_lists_have_multinomial_size() {
    let r1 = CoefficientSet::full_range(1).unwrap();
    let p = SolutionProfile::new(r1, vec![2, 2, 2]).unwrap();
    let (a, _) = half_profiles(&p);
    assert_eq!(multiset_permutations(&a, &r1.values()).len(), 6);
    let pm1 = CoefficientSet::no_zero(1).unwrap();
    let p = SolutionProfile::from_pairs(pm1, &[(1, 4)]).unwrap();
    let (a, _) = half_profiles(&p);
    assert_eq!(multiset_permutations(&a, &pm1.values()), vec![vec![1, 1]]);
    let r2 = CoefficientSet::full_range(2).unwrap();
    let p = SolutionProfile::new(r2, vec![2; 5]).unwrap();
    let (a, _) = half_profiles(&p);
    assert_eq!(multiset_permutations(&a, &r2.values()).len(), 120);
}

#[test]
fn meet_examples() {
    let l = SumList::from_unsorted(vec![(1, 0), (4, 1)]);
    let r = SumList::from_unsorted(vec![(-4, 0), (2, 1)]);
    assert_eq!(meet(&l, &r, Combine::Sum, 0), Some((1, 0)));
    assert_eq!(meet(&SumList::from_unsorted(vec![]), &r, Combine::Sum, 0), None);
    let s = SumList::from_unsorted(vec![(2, 0), (5, 1)]);
    let hit = meet(&s, &s, Combine::Difference, 0).unwrap();
    assert_eq!(hit.0, hit.1);
}

#[test]
fn classic_examples() {
    let r1 = CoefficientSet::full_range(1).unwrap();
    let pm1 = CoefficientSet::no_zero(1).unwrap();
    assert!(classic_mitm(&Instance::new(vec![1, 2, 3, 6], r1).unwrap()).unwrap().outcome.is_solved());
    assert!(!classic_mitm(&Instance::new(vec![5, 7], pm1).unwrap()).unwrap().outcome.is_solved());
    let r = classic_mitm(&Instance::new(vec![3, -3], pm1).unwrap()).unwrap();
    assert_eq!(r.outcome.solution().unwrap().c, vec![1, 1]);
}

#[test]
fn unbalanced_batch_on_planted() {
    let pm1 = CoefficientSet::no_zero(1).unwrap();
    let profile = SolutionProfile::from_pairs(pm1, &[(1, 6), (-1, 2)]).unwrap();
    let mut solved = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = gen_instance(8, pm1, &GenMode::Planted { profile: profile.clone(), w: 1000 }, &mut rng).unwrap();
        let r = unbalanced_sb(&g.instance, &profile, &mut rng, 200).unwrap();
        if let Some(s) = r.outcome.solution() {
            assert!(is_solution(&g.instance, &s.c).unwrap());
            solved += 1;
        }
    }
    assert!(solved >= 95, "solved {solved}/100");
}

#[test]
fn unbalanced_example_and_mismatch() {
    let r1 = CoefficientSet::full_range(1).unwrap();
    let inst = Instance::new(vec![1, 2, 3, 6], r1).unwrap();
    let p = SolutionProfile::from_pairs(r1, &[(1, 3), (-1, 1)]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let r = unbalanced_sb(&inst, &p, &mut rng, mitm::default_repeats(&p)).unwrap();
    assert_eq!(r.outcome.solution().unwrap().c, vec![1, 1, 1, -1]);
    let none = SolutionProfile::from_pairs(r1, &[(1, 4)]).unwrap();
    assert!(!unbalanced_sb(&inst, &none, &mut rng, 50).unwrap().outcome.is_solved());
}

#[test]
fn min_support_matches_scan() {
    let r1 = CoefficientSet::full_range(1).unwrap();
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let profile = SolutionProfile::new(r1, vec![3, 2, 3]).unwrap();
        let g = gen_instance(8, r1, &GenMode::Planted { profile, w: 500 }, &mut rng).unwrap();
        let best = oracle::all_solutions(&g.instance, usize::MAX)
            .unwrap()
            .iter()
            .map(|s| s.c.iter().filter(|&&z| z == 0).count())
            .max()
            .unwrap();
        let ms = oracle::min_support_solution(&g.instance).unwrap().unwrap();
        assert_eq!(ms.c.iter().filter(|&&z| z == 0).count(), best);
        assert!(is_solution(&g.instance, &ms.c).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn classic_agrees_with_oracle(set in any_set(), x in prop::collection::vec(-60i64..=60, 1..10)) {
        prop_assume!(x.iter().all(|&v| v != 0));
        let inst = Instance::new(x, set).unwrap();
        let o = brute_force_solve(&inst).unwrap();
        let m = classic_mitm(&inst).unwrap();
        prop_assert_eq!(o.outcome.is_solved(), m.outcome.is_solved());
        if let Some(s) = m.outcome.solution() {
            prop_assert!(is_solution(&inst, &s.c).unwrap());
        }
    }

    #[test]
    fn half_lists_match_profile(counts in prop::collection::vec(0usize..4, 3)) {
        let set = CoefficientSet::full_range(1).unwrap();
        prop_assume!(counts.iter().sum::<usize>() > 0);
        let p = SolutionProfile::new(set, counts.clone()).unwrap();
        let (a, b) = half_profiles(&p);
        for (i, c) in counts.iter().enumerate() {
            prop_assert_eq!(a[i] + b[i], *c);
        }
        let list = multiset_permutations(&a, &set.values());
        prop_assert_eq!(list.len() as u128, multinomial(&a));
        for v in &list {
            let got = profile_of(v, set).unwrap();
            prop_assert_eq!(got.counts(), &a[..]);
        }
    }

    #[test]
    fn meet_matches_quadratic_scan(
        l in prop::collection::vec(-20i128..20, 0..12),
        r in prop::collection::vec(-20i128..20, 0..12),
        target in -5i128..5,
        sum in any::<bool>(),
    ) {
        let combine = if sum { Combine::Sum } else { Combine::Difference };
        let ls = SumList::from_unsorted(l.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect());
        let rs = SumList::from_unsorted(r.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect());
        let f = |a: i128, b: i128| if sum { a + b } else { a - b };
        let exists = l.iter().any(|&a| r.iter().any(|&b| f(a, b) == target));
        let hit = meet(&ls, &rs, combine, target);
        prop_assert_eq!(hit.is_some(), exists);
        if let Some((i, j)) = hit {
            prop_assert_eq!(f(l[i as usize], r[j as usize]), target);
        }
    }
}

#[test]
fn unbalanced_sweep_agrees_with_oracle() {
    let sets = [CoefficientSet::full_range(1).unwrap(), CoefficientSet::no_zero(2).unwrap()];
    let mut agree = 0;
    for seed in 0..40u64 {
        let set = sets[seed as usize % 2];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = gen_instance(8, set, &GenMode::UniformRange { w: 60 }, &mut rng).unwrap().instance;
        let truth = brute_force_solve(&inst).unwrap().outcome.is_solved();
        let rep = mitm::solve_unbalanced(&inst, &mut rng).unwrap();
        if let Outcome::Solved(s) = &rep.outcome {
            assert!(is_solution(&inst, &s.c).unwrap());
        }
        if rep.outcome.is_solved() == truth {
            agree += 1;
        }
    }
    assert!(agree >= 38, "{agree}/40");
}
