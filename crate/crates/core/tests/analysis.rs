use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use sbal_core::analysis::*;
use sbal_core::rep_without0::catalog;
use sbal_core::*;

#[test]
fn pm2_optimum() {
    let o = optimize_pm2();
    assert_abs_diff_eq!(o.value, 1.108, epsilon = 5e-3);
    assert_abs_diff_eq!(o.alpha0, 0.105, epsilon = 1e-2);
    assert_abs_diff_eq!(o.alpha1, 0.156, epsilon = 1e-2);
    assert_abs_diff_eq!(o.value, 1.1070453, epsilon = 1e-6);
    assert!((optimize_pm2_with_step(5e-4).value - o.value).abs() < 1e-5);
}

#[test]
fn pm3_optimum() {
    let o = optimize_pm3();
    assert_abs_diff_eq!(o.value, 1.27955, epsilon = 1e-4);
    assert_abs_diff_eq!(o.beta, 0.1232, epsilon = 1e-3);
    let (u, v) = pm3_branches(0.1232);
    assert!((u - v).abs() < 1e-3);
    assert!((optimize_pm3_with_step(5e-4).value - o.value).abs() < 1e-5);
}

#[test]
fn ess_optimum() {
    let o = optimize_ess();
    assert_abs_diff_eq!(o.value, 0.771167, epsilon = 1e-4);
    assert_abs_diff_eq!(o.p, 0.22266, epsilon = 1e-3);
    assert_abs_diff_eq!(o.eps, 0.04493, epsilon = 1e-3);
    assert_abs_diff_eq!((binary_entropy(0.22266) + 0.77734) / 2.0, 0.7711675, epsilon = 1e-6);
    assert!((optimize_ess_with_step(5e-4).value - o.value).abs() < 1e-5);
}

#[test]
fn bound_row_values() {
    let lhs = [1.714488, 2.153924, 2.491734, 2.771524, 3.012788, 3.226264, 3.418596, 3.594214];
    for (d, &want) in (1..=8).zip(&lhs) {
        let row = appendix_b_check(d).unwrap();
        assert_abs_diff_eq!(row.lhs_base, want, epsilon = 1e-6);
        assert_abs_diff_eq!(row.rhs_base, (2.0 * d as f64 + 1.0).sqrt(), epsilon = 1e-12);
    }
    assert!((1..=20).all(|d| appendix_b_check(d).unwrap().holds()));
    for (d, lhs_bound, rhs_bound) in BOUND_ROWS {
        let row = appendix_b_check(d).unwrap();
        assert!(row.lhs_base < lhs_bound);
        if d != 6 {
            assert!((row.rhs_base - rhs_bound).abs() < 1e-3, "d = {d}");
        }
    }
}

#[test]
fn factor_table_values() {
    let want = [
        (3, 0, 2.244924),
        (4, 0, 2.449490),
        (4, 1, 2.449490),
        (5, 0, 2.639016),
        (5, 1, 2.639016),
        (5, 2, 2.581071),
        (6, 0, 2.817269),
        (6, 2, 2.696012),
        (7, 0, 2.985961),
        (7, 2, 2.805896),
        (7, 4, 2.781234),
    ];
    for (d, v, base) in want {
        let row = table1_check(d, v).unwrap();
        assert_abs_diff_eq!(row.ratio_base, base, epsilon = 1e-6);
        assert!(row.ratio_base < row.mim_base);
        assert!(row.mim_base >= row.mim_bound);
    }
    for row in &catalog().rows {
        for v in 0..row.variants.len() {
            assert!(table1_check(row.d, v).unwrap().ratio_base < row.mim_bound);
        }
    }
    assert!(table1_check(8, 0).is_err());
}

#[test]
fn runtime_exponents() {
    let r1 = CoefficientSet::full_range(1).unwrap();
    let bal = SolutionProfile::new(r1, vec![4, 4, 4]).unwrap();
    assert_abs_diff_eq!(runtime_exponent("unbalanced", &bal, None).unwrap(), 3f64.log2() / 2.0, epsilon = 1e-12);
    let r2 = CoefficientSet::full_range(2).unwrap();
    let p = SolutionProfile::new(r2, vec![2; 5]).unwrap();
    let want = (3f64.powi(10) / (3f64.powi(2) * 2f64.powi(4))).log2() / 10.0;
    assert_abs_diff_eq!(runtime_exponent("rep0", &p, None).unwrap(), want, epsilon = 1e-12);
    let pm1 = CoefficientSet::no_zero(1).unwrap();
    let single = SolutionProfile::new(pm1, vec![0, 8]).unwrap();
    assert_eq!(runtime_exponent("unbalanced", &single, None).unwrap(), 0.0);
    assert!(runtime_exponent("bogus", &bal, None).is_err());
}

proptest! {
    #[test]
    fn entropy_symmetric_and_concave(a in 0.0f64..1.0, b in 0.0f64..1.0, t in 0.0f64..1.0) {
        let b = b * (1.0 - a);
        let c = 1.0 - a - b;
        let h = entropy(&[a, b, c]).unwrap();
        prop_assert!((h - entropy(&[c, a, b]).unwrap()).abs() < 1e-9);
        let mid = t * a + (1.0 - t) * b;
        prop_assert!(binary_entropy(mid) + 1e-12 >= t * binary_entropy(a) + (1.0 - t) * binary_entropy(b));
    }
}
