#![allow(dead_code)]

use pcm_core::{theta_vector, IncompletePcm, ThetaVector};
use rand::seq::index::sample;
use rand::Rng;

pub const SAATY: [f64; 17] = [
    1.0 / 9.0,
    1.0 / 8.0,
    1.0 / 7.0,
    1.0 / 6.0,
    1.0 / 5.0,
    1.0 / 4.0,
    1.0 / 3.0,
    1.0 / 2.0,
    1.0,
    2.0,
    3.0,
    4.0,
    5.0,
    6.0,
    7.0,
    8.0,
    9.0,
];

/// Upper-triangle Saaty matrix with `m` random missing cells.
pub fn random_instance(n: usize, m: usize, rng: &mut impl Rng) -> IncompletePcm {
    let cells = n * (n - 1) / 2;
    let missing = sample(rng, cells, m).into_vec();
    let values: Vec<f64> = (0..cells).map(|_| SAATY[rng.random_range(0..17)]).collect();
    let mut p = 0;
    IncompletePcm::from_upper(n, |_, _| {
        let v = if missing.contains(&p) { None } else { Some(values[p]) };
        p += 1;
        v
    })
    .unwrap()
}

/// `m` is clamped so that a spanning tree can remain.
pub fn random_connected(n: usize, m: usize, rng: &mut impl Rng) -> IncompletePcm {
    let m = m.min(n * (n - 1) / 2 - (n - 1));
    loop {
        let a = random_instance(n, m, rng);
        if a.graph().is_connected() {
            return a;
        }
    }
}

pub fn random_disconnected(n: usize, m: usize, rng: &mut impl Rng) -> IncompletePcm {
    loop {
        let a = random_instance(n, m, rng);
        if !a.graph().is_connected() {
            return a;
        }
    }
}

/// Upper-triangle matrix from a row-major list of the `n(n-1)/2` upper cells.
pub fn upper(n: usize, cells: &[Option<f64>]) -> IncompletePcm {
    let mut it = cells.iter();
    IncompletePcm::from_upper(n, |_, _| *it.next().unwrap()).unwrap()
}

/// Lexicographically smallest theta over a grid of log-values for up to two
/// missing entries.
pub fn grid_best_theta(a: &IncompletePcm, half_width: f64, steps: usize) -> ThetaVector {
    let m = a.missing_count();
    assert!(m <= 2);
    let grid: Vec<f64> = (0..=steps).map(|s| -half_width + 2.0 * half_width * s as f64 / steps as f64).collect();
    let mut best: Option<ThetaVector> = None;
    let mut consider = |logs: &[f64]| {
        let theta = theta_vector(&a.fill_log(logs).unwrap()).unwrap();
        if best.as_ref().is_none_or(|b| theta.values().partial_cmp(b.values()) == Some(std::cmp::Ordering::Less)) {
            best = Some(theta);
        }
    };
    match m {
        0 => consider(&[]),
        1 => grid.iter().for_each(|&x| consider(&[x])),
        _ => {
            for &x in &grid {
                for &y in &grid {
                    consider(&[x, y]);
                }
            }
        }
    }
    best.unwrap()
}
