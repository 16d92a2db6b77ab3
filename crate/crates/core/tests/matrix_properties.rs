mod common;

use std::cmp::Ordering;

use pcm_core::{
    consistency_index, cr_optimal_complete, ici, lambda_max, lex_compare_tol, lex_complete, lls_optimal_complete,
    matrix_ti, triad_ki, triad_ti, CompletePcm, IncompletePcm,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn log_uniform(r: &mut impl Rng) -> f64 {
    (r.random_range(-1.0..1.0) * 9f64.ln()).exp()
}

fn random_complete(n: usize, r: &mut impl Rng) -> CompletePcm {
    CompletePcm::from_upper(n, |_, _| log_uniform(r)).unwrap()
}

#[test]
fn reciprocal_closure() {
    let mut r = rng(1);
    for _ in 0..200 {
        let n = r.random_range(2..8);
        let a = random_complete(n, &mut r);
        for i in 0..n {
            for j in 0..n {
                let back = 1.0 / a.get(j, i);
                assert!((back - a.get(i, j)).abs() <= 1e-15 * a.get(i, j));
            }
        }
    }
}

#[test]
fn ki_ti_bridge_on_many_triads() {
    let mut r = rng(2);
    for _ in 0..1000 {
        let (x, y, z) = (log_uniform(&mut r), log_uniform(&mut r), log_uniform(&mut r));
        let ti = triad_ti(x, y, z).unwrap();
        assert!((triad_ki(x, y, z).unwrap() - (1.0 - 1.0 / ti)).abs() <= 1e-12);
    }
}

#[test]
fn weight_ratios_are_consistent() {
    let mut r = rng(3);
    for _ in 0..200 {
        let n = r.random_range(3..9);
        let w: Vec<f64> = (0..n).map(|_| r.random_range(0.1..10.0)).collect();
        let a = CompletePcm::from_upper(n, |i, j| w[i] / w[j]).unwrap();
        assert!((matrix_ti(&a).unwrap() - 1.0).abs() <= 1e-12);
        assert!((lambda_max(&a).unwrap() - n as f64).abs() <= 1e-10);
    }
}

#[test]
fn eigenvalue_at_least_order() {
    let mut r = rng(4);
    for _ in 0..300 {
        let n = r.random_range(3..9);
        let a = random_complete(n, &mut r);
        let lambda = lambda_max(&a).unwrap();
        assert!(lambda >= n as f64 - 1e-10);
        // inconsistent draws are strictly above n
        assert_eq!(matrix_ti(&a).unwrap() > 1.0 + 1e-6, lambda > n as f64 + 1e-12);
    }
}

#[test]
fn ici_on_many_pairs() {
    let mut r = rng(5);
    for _ in 0..1000 {
        let n = r.random_range(2..7);
        let (a, b) = (random_complete(n, &mut r), random_complete(n, &mut r));
        let (ab, ba) = (ici(&a, &b).unwrap(), ici(&b, &a).unwrap());
        assert!((ab - ba).abs() <= 1e-12);
        assert!(ab > 0.0);
        assert_eq!(ici(&a, &a).unwrap(), 0.0);
        assert!(consistency_index(&a).unwrap() >= 0.0);
    }
}

#[test]
fn known_entries_are_kept_bitwise() {
    let mut r = rng(6);
    for _ in 0..40 {
        let n = r.random_range(4..7);
        let a = common::random_connected(n, r.random_range(1..5), &mut r);
        for res in [lex_complete(&a).unwrap(), cr_optimal_complete(&a).unwrap(), lls_optimal_complete(&a).unwrap()] {
            for i in 0..n {
                for j in 0..n {
                    if let Some(v) = a.get(i, j) {
                        assert_eq!(res.matrix.get(i, j).to_bits(), v.to_bits());
                    }
                }
            }
        }
    }
}

#[test]
fn trace_levels_never_increase() {
    let mut r = rng(7);
    for _ in 0..40 {
        let n = r.random_range(4..8);
        let a = common::random_connected(n, r.random_range(1..6), &mut r);
        let res = lex_complete(&a).unwrap();
        assert!(res.trace.windows(2).all(|w| w[1].level <= w[0].level + 1e-12));
    }
}

#[test]
fn relabeling_commutes_with_completion() {
    let mut r = rng(8);
    for _ in 0..50 {
        let n = r.random_range(4..7);
        let a = common::random_connected(n, r.random_range(1..5), &mut r);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut r);
        let direct = lex_complete(&a).unwrap().matrix.permuted(&perm);
        let via = lex_complete(&a.permuted(&perm)).unwrap().matrix;
        let diff = direct.as_slice().iter().zip(via.as_slice()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(diff <= 1e-9, "{diff:e}");
    }
}

#[test]
fn eigenvalue_and_lexicographic_optima_bound_each_other() {
    let mut r = rng(9);
    for _ in 0..50 {
        let n = r.random_range(4..8);
        let a: IncompletePcm = common::random_connected(n, r.random_range(1..6), &mut r);
        let lex = lex_complete(&a).unwrap();
        let cr = cr_optimal_complete(&a).unwrap();
        assert!(lambda_max(&cr.matrix).unwrap() <= lambda_max(&lex.matrix).unwrap() + 1e-9);
        assert_ne!(lex_compare_tol(&lex.theta, &cr.theta, 1e-6).unwrap(), Ordering::Greater);
    }
}
