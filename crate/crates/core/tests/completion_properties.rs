mod common;

use std::cmp::Ordering;

use pcm_core::{
    consistency_index, cr_optimal_complete, ici, independent_fast_path, lambda_max, lex_compare, lex_compare_tol,
    lex_complete, lex_complete_with, lls_logs, matrix_ti, theta_vector, triad_ki, triad_ti, CompletePcm,
    IncompletePcm, LexOptions, ThetaVector, TieBreak,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn max_entry_diff(a: &CompletePcm, b: &CompletePcm) -> f64 {
    a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x - y).abs() / x.max(1.0)).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ki_is_one_minus_inverse_ti(x in 0.01f64..100.0, y in 0.01f64..100.0, z in 0.01f64..100.0) {
        let ti = triad_ti(x, y, z).unwrap();
        let ki = triad_ki(x, y, z).unwrap();
        prop_assert!(ti >= 1.0);
        prop_assert!((ki - (1.0 - 1.0 / ti)).abs() < 1e-12);
    }

    #[test]
    fn theta_is_permutation_invariant(seed: u64, n in 3usize..8) {
        let mut r = rng(seed);
        let a = CompletePcm::from_upper(n, |_, _| common::SAATY[r.random_range(0..17)]).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut r);
        let t1 = theta_vector(&a).unwrap();
        let t2 = theta_vector(&a.permuted(&perm)).unwrap();
        prop_assert_eq!(lex_compare_tol(&t1, &t2, 1e-12).unwrap(), Ordering::Equal);
    }

    #[test]
    fn lex_order_is_total(a in prop::collection::vec(1.0f64..4.0, 4), b in prop::collection::vec(1.0f64..4.0, 4),
                          c in prop::collection::vec(1.0f64..4.0, 4)) {
        let (a, b, c) = (ThetaVector::from_values(a).unwrap(), ThetaVector::from_values(b).unwrap(),
                         ThetaVector::from_values(c).unwrap());
        let ab = lex_compare(&a, &b).unwrap();
        prop_assert_eq!(ab, lex_compare(&b, &a).unwrap().reverse());
        if ab != Ordering::Greater && lex_compare(&b, &c).unwrap() != Ordering::Greater {
            prop_assert_ne!(lex_compare(&a, &c).unwrap(), Ordering::Greater);
        }
    }

    #[test]
    fn consistency_index_nonnegative(seed: u64, n in 3usize..8) {
        let mut r = rng(seed);
        let a = CompletePcm::from_upper(n, |_, _| common::SAATY[r.random_range(0..17)]).unwrap();
        let ci = consistency_index(&a).unwrap();
        prop_assert!(ci >= 0.0);
        let w: Vec<f64> = (0..n).map(|_| r.random_range(0.1..10.0)).collect();
        let c = CompletePcm::from_weights(&w).unwrap();
        prop_assert!(consistency_index(&c).unwrap() < 1e-9);
        prop_assert!((matrix_ti(&c).unwrap() - 1.0).abs() < 1e-9);
        prop_assert_eq!(ci < 1e-9, matrix_ti(&a).unwrap() < 1.0 + 1e-9);
    }

    #[test]
    fn ici_symmetric_and_nonnegative(seed: u64, n in 2usize..7) {
        let mut r = rng(seed);
        let a = CompletePcm::from_upper(n, |_, _| common::SAATY[r.random_range(0..17)]).unwrap();
        let b = CompletePcm::from_upper(n, |_, _| common::SAATY[r.random_range(0..17)]).unwrap();
        let ab = ici(&a, &b).unwrap();
        prop_assert!(ab >= 0.0);
        prop_assert!((ab - ici(&b, &a).unwrap()).abs() < 1e-12);
        if ab == 0.0 {
            prop_assert!(max_entry_diff(&a, &b) <= 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reversed_tie_break_gives_same_fill(seed: u64, n in 4usize..7, m in 1usize..5) {
        let a = common::random_connected(n, m, &mut rng(seed));
        let low = lex_complete(&a).unwrap();
        let high = lex_complete_with(&a, &LexOptions { tie_break: TieBreak::Highest, ..LexOptions::default() }).unwrap();
        prop_assert!(max_entry_diff(&low.matrix, &high.matrix) < 1e-7);
        prop_assert!(!low.non_unique);
    }

    #[test]
    fn folding_known_triads_changes_nothing(seed: u64, n in 4usize..6, m in 1usize..4) {
        let a = common::random_connected(n, m, &mut rng(seed));
        let folded = lex_complete(&a).unwrap();
        let plain = lex_complete_with(&a, &LexOptions { fold_known_triads: false, ..LexOptions::default() }).unwrap();
        prop_assert!(max_entry_diff(&folded.matrix, &plain.matrix) < 1e-7);
    }

    #[test]
    fn lex_fill_is_permutation_equivariant(seed: u64, n in 4usize..7, m in 1usize..5) {
        let mut r = rng(seed);
        let a = common::random_connected(n, m, &mut r);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut r);
        let direct = lex_complete(&a).unwrap().matrix.permuted(&perm);
        let via = lex_complete(&a.permuted(&perm)).unwrap().matrix;
        prop_assert!(max_entry_diff(&direct, &via) < 1e-7);
    }

    #[test]
    fn cross_block_scaling_keeps_theta(seed: u64, n in 4usize..7) {
        let mut r = rng(seed);
        let total = n * (n - 1) / 2;
        let m = r.random_range(n - 1..total);
        let a = common::random_disconnected(n, m, &mut r);
        let res = lex_complete(&a).unwrap();
        prop_assert!(res.non_unique);
        let comp = a.graph().components();
        let scaled = CompletePcm::from_upper(n, |i, j| {
            let x = res.matrix.get(i, j);
            match (comp[i] == 0, comp[j] == 0) {
                (true, false) => 2.0 * x,
                (false, true) => 0.5 * x,
                _ => x,
            }
        }).unwrap();
        let t = theta_vector(&scaled).unwrap();
        prop_assert_eq!(lex_compare_tol(&t, &res.theta, 1e-9).unwrap(), Ordering::Equal);
    }

    #[test]
    fn fast_path_matches_lp(seed: u64, n in 4usize..8) {
        let mut r = rng(seed);
        // random partial matching of missing cells
        let mut verts: Vec<usize> = (0..n).collect();
        verts.shuffle(&mut r);
        let pairs = r.random_range(1..=n / 2);
        let missing: Vec<(usize, usize)> = (0..pairs)
            .map(|p| (verts[2 * p].min(verts[2 * p + 1]), verts[2 * p].max(verts[2 * p + 1])))
            .collect();
        let a = IncompletePcm::from_upper(n, |i, j| {
            if missing.contains(&(i, j)) { None } else { Some(common::SAATY[r.random_range(0..17)]) }
        }).unwrap();
        let fast = independent_fast_path(&a).unwrap();
        let lex = lex_complete(&a).unwrap();
        prop_assert!(max_entry_diff(&fast.matrix, &lex.matrix) < 1e-7);
    }

    #[test]
    fn lls_gradient_vanishes(seed: u64, n in 3usize..8, m in 0usize..4) {
        let a = common::random_connected(n, m.min(n - 2), &mut rng(seed));
        let v = lls_logs(&a).unwrap();
        let mut grad = vec![0.0; n];
        for (i, j) in a.graph().edges().iter().copied() {
            let res = a.get(i, j).unwrap().ln() - v[i] + v[j];
            grad[i] -= 2.0 * res;
            grad[j] += 2.0 * res;
        }
        prop_assert!(grad.iter().all(|g| g.abs() < 1e-9), "{:?}", grad);
    }
}

/// Grid search and cross-method comparison on small instances.
#[test]
fn lex_beats_grid_and_eigenvalue_fill() {
    let mut r = rng(17);
    for _ in 0..30 {
        let n = r.random_range(4..=5);
        let m = r.random_range(1..=2);
        let a = common::random_connected(n, m, &mut r);
        let lex = lex_complete(&a).unwrap();
        let grid = common::grid_best_theta(&a, (81.0f64).ln(), if m == 1 { 4000 } else { 300 });
        assert_ne!(lex_compare_tol(&grid, &lex.theta, 1e-6).unwrap(), Ordering::Less);

        let cr = cr_optimal_complete(&a).unwrap();
        assert!(lambda_max(&cr.matrix).unwrap() <= lambda_max(&lex.matrix).unwrap() + 1e-9);
        assert_ne!(lex_compare_tol(&lex.theta, &cr.theta, 1e-6).unwrap(), Ordering::Greater);
    }
}

#[test]
fn fast_path_agrees_on_many_instances() {
    let mut r = rng(29);
    for case in 0..100 {
        let n = r.random_range(5..=8);
        let mut verts: Vec<usize> = (0..n).collect();
        verts.shuffle(&mut r);
        let pairs = r.random_range(1..=n / 2);
        let missing: Vec<(usize, usize)> = (0..pairs)
            .map(|p| (verts[2 * p].min(verts[2 * p + 1]), verts[2 * p].max(verts[2 * p + 1])))
            .collect();
        let a = IncompletePcm::from_upper(n, |i, j| {
            if missing.contains(&(i, j)) { None } else { Some(common::SAATY[r.random_range(0..17)]) }
        })
        .unwrap();
        let fast = independent_fast_path(&a).unwrap();
        let lex = lex_complete(&a).unwrap();
        let diff = max_entry_diff(&fast.matrix, &lex.matrix);
        assert!(diff <= 1e-9, "case {case}: {diff:e}");
    }
}

/// Grid of step `h` (in logs) around the lex solution, refined twice around
/// the best point found.
#[test]
fn no_better_completion_near_the_optimum() {
    let mut r = rng(31);
    for case in 0..30 {
        let n = r.random_range(4..=5);
        let m = r.random_range(1..=2);
        let a = common::random_connected(n, m, &mut r);
        let lex = lex_complete(&a).unwrap();
        let x0: Vec<f64> = a.missing_cells().iter().map(|&(i, j)| lex.matrix.get(i, j).ln()).collect();
        let mut center = x0.clone();
        let mut best = lex.theta.clone();
        let mut h = 1e-3;
        for _ in 0..3 {
            let steps: Vec<f64> = (-20..=20).map(|s| s as f64 * h).collect();
            let offsets: Vec<Vec<f64>> = if m == 1 {
                steps.iter().map(|&d| vec![d]).collect()
            } else {
                steps.iter().flat_map(|&d| steps.iter().map(move |&e| vec![d, e])).collect()
            };
            let mut next = center.clone();
            for off in offsets {
                let x: Vec<f64> = center.iter().zip(&off).map(|(c, d)| c + d).collect();
                let t = theta_vector(&a.fill_log(&x).unwrap()).unwrap();
                if lex_compare(&t, &best).unwrap() == Ordering::Less {
                    best = t;
                    next = x;
                }
            }
            center = next;
            h /= 10.0;
        }
        assert_ne!(lex_compare_tol(&best, &lex.theta, 1e-6).unwrap(), Ordering::Less, "case {case}");
    }
}
