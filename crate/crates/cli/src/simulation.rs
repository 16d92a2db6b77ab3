//! Monte Carlo comparison of the lexicographically optimal and the
//! eigenvalue-optimal completions on random Saaty-scale matrices.
//!
//! Candidate `g` of a run is generated from its own ChaCha8 stream
//! (`seed`, stream `g`), so every candidate is reproducible on its own and the
//! accepted records do not depend on evaluation order.

use std::fmt::Write as _;

use pcm_core::{
    consistency_index, cr_optimal_complete, ici, lambda_min_lower_bound, lex_complete, ratio_to_ri, IncompletePcm,
    RiTable,
};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};
use statrs::statistics::{Data, OrderStatistics, Statistics};

use crate::error::CliError;
use crate::format::{csv_string, exact, fixed};

pub const SAATY_SCALE: [f64; 17] = [
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

/// Accepted CR values may exceed the threshold by this much (solver noise).
pub const CR_SLACK: f64 = 1e-9;

/// Gradient tolerance of the rough minimisation used to reject candidates.
const ROUGH_GRAD_TOL: f64 = 1e-3;

/// Generator for candidate `index` of a run seeded with `seed`.
pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `m` distinct upper-triangle cells are left missing, chosen uniformly; every
/// other upper cell is drawn uniformly from the 17 Saaty scale values.
pub fn random_saaty_incomplete(n: usize, m: usize, rng: &mut impl Rng) -> IncompletePcm {
    let cells = n * (n - 1) / 2;
    let mut missing = vec![false; cells];
    for p in sample(rng, cells, m.min(cells)) {
        missing[p] = true;
    }
    let mut p = 0;
    IncompletePcm::from_upper(n, |_, _| {
        let known = !missing[p];
        p += 1;
        known.then(|| SAATY_SCALE[rng.random_range(0..SAATY_SCALE.len())])
    })
    .expect("scale values are positive")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    pub label: String,
    pub n: usize,
    pub m: usize,
    pub cr_threshold: f64,
    pub target_count: usize,
    pub seed: u64,
    /// Instances whose eigenvalue-optimal fill leaves this range are dropped.
    pub guard_band: (f64, f64),
    /// The run aborts after `guard_factor * target_count` candidates.
    pub guard_factor: u64,
}

pub const PRESETS: [&str; 4] = ["case-5-1", "case-5-2", "case-6-6", "case-10-1"];

impl SimConfig {
    pub fn new(n: usize, m: usize, cr_threshold: f64, target_count: usize, seed: u64) -> Self {
        SimConfig {
            label: format!("n{n}-m{m}"),
            n,
            m,
            cr_threshold,
            target_count,
            seed,
            guard_band: (1.0 / 9.0, 9.0),
            guard_factor: 1000,
        }
    }

    pub fn preset(name: &str, seed: u64) -> Option<Self> {
        // (10, 1) accepts roughly one candidate in 2000, so its guard is wider.
        let (n, m, threshold, target, guard_factor) = match name {
            "case-5-1" => (5, 1, 0.1, 500, 1000),
            "case-5-2" => (5, 2, 0.1, 500, 1000),
            "case-6-6" => (6, 6, 0.1, 100, 1000),
            "case-10-1" => (10, 1, 0.5, 100, 10_000),
            _ => return None,
        };
        Some(SimConfig { label: name.to_string(), guard_factor, ..SimConfig::new(n, m, threshold, target, seed) })
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let pairs = self.n * self.n.saturating_sub(1) / 2;
        if self.n < 3 {
            return Err(CliError::Config(format!("n must be at least 3, got {}", self.n)));
        }
        if self.m == 0 || self.m >= pairs {
            return Err(CliError::Config(format!("m must be in 1..{pairs} for n = {}, got {}", self.n, self.m)));
        }
        if self.cr_threshold.is_nan() || self.cr_threshold < 0.0 {
            return Err(CliError::Config("CR threshold must be non-negative".into()));
        }
        if self.guard_factor == 0 {
            return Err(CliError::Config("guard factor must be positive".into()));
        }
        if self.target_count == 0 {
            return Err(CliError::Config("target count must be positive".into()));
        }
        let (lo, hi) = self.guard_band;
        if !(lo > 0.0 && lo <= hi) {
            return Err(CliError::Config("guard band must satisfy 0 < low <= high".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rejection {
    Disconnected,
    ConsistencyRatio,
    GuardBand,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimRecord {
    pub generation: u64,
    /// First 16 hex digits of the SHA-256 of the matrix file text.
    pub digest: String,
    pub missing: Vec<(usize, usize)>,
    pub cr: f64,
    pub ici: f64,
    pub lex_fill: Vec<f64>,
    pub eig_fill: Vec<f64>,
}

pub fn digest(matrix: &IncompletePcm) -> String {
    let hash = Sha256::digest(crate::format::write_matrix(matrix).as_bytes());
    format!("{hash:x}")[..16].to_string()
}

/// Lower bound on `λ_max` over all fills: the Perron root of a principal
/// submatrix is at most that of the whole matrix, so any submatrix left after
/// deleting a vertex cover of the missing cells gives one. Each single-vertex
/// cover of a lone missing cell is tried, otherwise a greedy cover is used.
pub fn lambda_lower_bound(matrix: &IncompletePcm) -> Result<f64, CliError> {
    let n = matrix.order();
    let missing = matrix.missing_cells();
    let covers: Vec<Vec<usize>> = match missing {
        [] => vec![vec![]],
        [(i, j)] => vec![vec![*i], vec![*j]],
        _ => {
            let mut left = missing.to_vec();
            let mut cover = Vec::new();
            while !left.is_empty() {
                let mut degree = vec![0usize; n];
                for &(i, j) in &left {
                    degree[i] += 1;
                    degree[j] += 1;
                }
                let v = (0..n).max_by_key(|&v| (degree[v], std::cmp::Reverse(v))).expect("n > 0");
                cover.push(v);
                left.retain(|&(i, j)| i != v && j != v);
            }
            vec![cover]
        }
    };
    let mut best = 0.0f64;
    for cover in covers {
        let keep: Vec<usize> = (0..n).filter(|v| !cover.contains(v)).collect();
        if keep.len() < 2 {
            continue;
        }
        let sub = pcm_core::CompletePcm::from_upper(keep.len(), |a, b| {
            matrix.get(keep[a], keep[b]).expect("cover removes every missing cell")
        })?;
        best = best.max(pcm_core::lambda_max(&sub)?);
    }
    Ok(best)
}

/// Runs the rejection pipeline on candidate `generation`.
pub fn evaluate(config: &SimConfig, ri: f64, generation: u64) -> Result<Result<SimRecord, Rejection>, CliError> {
    let matrix = random_saaty_incomplete(config.n, config.m, &mut rng_for(config.seed, generation));
    if !matrix.graph().is_connected() {
        return Ok(Err(Rejection::Disconnected));
    }
    // Cheap certified lower bounds first; most candidates fail here.
    let n = config.n as f64;
    let too_inconsistent = |lambda: f64| ratio_to_ri(((lambda - n) / (n - 1.0)).max(0.0), ri) > config.cr_threshold + CR_SLACK;
    if too_inconsistent(lambda_lower_bound(&matrix)?) || too_inconsistent(lambda_min_lower_bound(&matrix, ROUGH_GRAD_TOL)?) {
        return Ok(Err(Rejection::ConsistencyRatio));
    }
    let eig = cr_optimal_complete(&matrix)?;
    let cr = ratio_to_ri(consistency_index(&eig.matrix)?, ri);
    if cr > config.cr_threshold + CR_SLACK {
        return Ok(Err(Rejection::ConsistencyRatio));
    }
    let (lo, hi) = config.guard_band;
    let eig_fill = eig.filled_values();
    if eig_fill.iter().any(|&v| v < lo || v > hi) {
        return Ok(Err(Rejection::GuardBand));
    }
    let lex = lex_complete(&matrix)?;
    Ok(Ok(SimRecord {
        generation,
        digest: digest(&matrix),
        missing: matrix.missing_cells().to_vec(),
        cr,
        ici: ici(&lex.matrix, &eig.matrix)?,
        lex_fill: lex.filled_values(),
        eig_fill,
    }))
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RejectionCounts {
    pub disconnected: u64,
    pub consistency_ratio: u64,
    pub guard_band: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IciSummary {
    pub mean: f64,
    pub median: f64,
    pub lower_quartile: f64,
    pub upper_quartile: f64,
    pub min: f64,
    pub max: f64,
    pub fraction_below_10: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub config: SimConfig,
    pub random_index: f64,
    pub generated: u64,
    pub accepted: usize,
    pub rejected: RejectionCounts,
    pub ici: IciSummary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub records: Vec<SimRecord>,
    pub summary: Summary,
}

pub fn summarize_ici(values: &[f64]) -> IciSummary {
    if values.is_empty() {
        let nan = f64::NAN;
        return IciSummary {
            mean: nan,
            median: nan,
            lower_quartile: nan,
            upper_quartile: nan,
            min: nan,
            max: nan,
            fraction_below_10: nan,
        };
    }
    let mut data = Data::new(values.to_vec());
    IciSummary {
        mean: values.mean(),
        median: data.median(),
        lower_quartile: data.lower_quartile(),
        upper_quartile: data.upper_quartile(),
        min: values.min(),
        max: values.max(),
        fraction_below_10: values.iter().filter(|&&v| v < 10.0).count() as f64 / values.len() as f64,
    }
}

/// Generates candidates until `target_count` are accepted.
pub fn run_experiment(config: &SimConfig, ri: &RiTable) -> Result<Experiment, CliError> {
    config.validate()?;
    let index = ri.get(config.n, config.m).ok_or(pcm_core::Error::MissingRandomIndex { n: config.n, m: config.m })?;
    let limit = config.guard_factor.saturating_mul(config.target_count as u64);
    let mut records = Vec::with_capacity(config.target_count);
    let mut rejected = RejectionCounts::default();
    let mut generation = 0u64;
    while records.len() < config.target_count {
        if generation >= limit {
            return Err(CliError::GuardTripped { generated: generation, accepted: records.len(), target: config.target_count });
        }
        match evaluate(config, index, generation)? {
            Ok(r) => records.push(r),
            Err(Rejection::Disconnected) => rejected.disconnected += 1,
            Err(Rejection::ConsistencyRatio) => rejected.consistency_ratio += 1,
            Err(Rejection::GuardBand) => rejected.guard_band += 1,
        }
        generation += 1;
    }
    let ici: Vec<f64> = records.iter().map(|r| r.ici).collect();
    let summary = Summary {
        config: config.clone(),
        random_index: index,
        generated: generation,
        accepted: records.len(),
        rejected,
        ici: summarize_ici(&ici),
    };
    Ok(Experiment { records, summary })
}

fn join_values(values: &[f64], precision: Option<usize>) -> String {
    let parts: Vec<String> = values.iter().map(|&v| precision.map_or_else(|| exact(v), |p| fixed(v, p))).collect();
    parts.join(";")
}

/// One row per accepted record:
/// `case,generation,digest,cr,ici,missing,lex_fill,eig_fill`, where
/// `missing` lists 1-based cells as `i-j` and the fills list values in the
/// same order, all `;`-separated. `precision` rounds the numeric columns.
pub fn write_csv(exp: &Experiment, precision: Option<usize>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["case", "generation", "digest", "cr", "ici", "missing", "lex_fill", "eig_fill"])?;
    let num = |v: f64| precision.map_or_else(|| exact(v), |p| fixed(v, p));
    for r in &exp.records {
        let missing: Vec<String> = r.missing.iter().map(|(i, j)| format!("{}-{}", i + 1, j + 1)).collect();
        w.write_record([
            exp.summary.config.label.clone(),
            r.generation.to_string(),
            r.digest.clone(),
            num(r.cr),
            num(r.ici),
            missing.join(";"),
            join_values(&r.lex_fill, precision),
            join_values(&r.eig_fill, precision),
        ])?;
    }
    csv_string(w)
}

pub fn summary_json(summary: &Summary) -> String {
    let mut s = serde_json::to_string_pretty(summary).expect("summary serialises");
    s.push('\n');
    s
}

/// Short human-readable summary.
pub fn summary_text(summary: &Summary, precision: usize) -> String {
    let s = summary;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{}: n = {}, m = {}, CR threshold {}, RI {}",
        s.config.label,
        s.config.n,
        s.config.m,
        fixed(s.config.cr_threshold, precision),
        fixed(s.random_index, precision)
    );
    let _ = writeln!(
        out,
        "accepted {} of {} (disconnected {}, CR {}, guard band {})",
        s.accepted, s.generated, s.rejected.disconnected, s.rejected.consistency_ratio, s.rejected.guard_band
    );
    let i = &s.ici;
    let _ = writeln!(
        out,
        "ICI mean {}, median {}, quartiles {} .. {}, below 10: {}%",
        fixed(i.mean, precision),
        fixed(i.median, precision),
        fixed(i.lower_quartile, precision),
        fixed(i.upper_quartile, precision),
        fixed(100.0 * i.fraction_below_10, 1)
    );
    out
}

/// Mean consistency index of eigenvalue-optimal fills of `samples` random
/// connected instances. Candidate `g` uses stream `g`; disconnected
/// candidates are skipped. When every connected instance is a spanning tree
/// the result is exactly 0.
pub fn estimate_random_index(n: usize, m: usize, samples: usize, seed: u64) -> Result<f64, CliError> {
    if n < 3 {
        return Err(CliError::Config(format!("n must be at least 3, got {n}")));
    }
    if samples == 0 {
        return Err(CliError::Config("samples must be positive".into()));
    }
    let pairs = n * (n - 1) / 2;
    if m > pairs {
        return Err(CliError::Config(format!("cannot leave {m} of {pairs} comparisons missing")));
    }
    let known = pairs - m;
    // fewer than three comparisons cannot close a cycle, and a connected graph
    // with n - 1 edges is a tree: either way a consistent fill always exists
    if known < 3 || known == n - 1 {
        return Ok(0.0);
    }
    if known < n - 1 {
        return Err(CliError::Config(format!("no connected instance has {m} of {pairs} comparisons missing")));
    }
    let limit = 1000 * samples as u64;
    let mut total = 0.0;
    let mut count = 0;
    let mut generation = 0u64;
    while count < samples {
        if generation >= limit {
            return Err(CliError::Config(format!("too few connected instances for n = {n}, m = {m}")));
        }
        let matrix = random_saaty_incomplete(n, m, &mut rng_for(seed, generation));
        generation += 1;
        if !matrix.graph().is_connected() {
            continue;
        }
        total += consistency_index(&cr_optimal_complete(&matrix)?.matrix)?;
        count += 1;
    }
    Ok(total / samples as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_is_deterministic() {
        let a = random_saaty_incomplete(5, 2, &mut rng_for(9, 3));
        let b = random_saaty_incomplete(5, 2, &mut rng_for(9, 3));
        assert_eq!(a, b);
        assert_eq!(a.missing_count(), 2);
        assert_ne!(a, random_saaty_incomplete(5, 2, &mut rng_for(9, 4)));
    }

    #[test]
    fn all_missing_gives_empty_graph() {
        let a = random_saaty_incomplete(3, 3, &mut rng_for(1, 0));
        assert!(a.graph().edges().is_empty());
        assert!(!a.graph().is_connected());
    }

    #[test]
    fn presets_are_valid() {
        for p in PRESETS {
            SimConfig::preset(p, 1).unwrap().validate().unwrap();
        }
        assert!(SimConfig::preset("case-7-7", 1).is_none());
        assert!(SimConfig::new(5, 0, 0.1, 1, 0).validate().is_err());
        assert!(SimConfig::new(5, 10, 0.1, 1, 0).validate().is_err());
        assert!(SimConfig::new(5, 1, 0.1, 0, 0).validate().is_err());
    }

    #[test]
    fn tree_pattern_has_zero_index() {
        assert_eq!(estimate_random_index(3, 1, 10, 1).unwrap(), 0.0);
        assert_eq!(estimate_random_index(3, 2, 10, 1).unwrap(), 0.0);
        assert_eq!(estimate_random_index(4, 3, 10, 1).unwrap(), 0.0);
        assert_eq!(estimate_random_index(4, 4, 10, 1).unwrap(), 0.0);
        assert!(estimate_random_index(5, 7, 10, 1).is_err());
        assert!(estimate_random_index(4, 7, 10, 1).is_err());
        assert_eq!(estimate_random_index(5, 3, 10, 1).unwrap(), estimate_random_index(5, 3, 10, 1).unwrap());
        assert!(estimate_random_index(4, 1, 0, 1).is_err());
    }

    #[test]
    fn lower_bound_never_exceeds_optimum() {
        for g in 0..200 {
            let (n, m) = [(4, 1), (5, 2), (6, 6), (5, 1)][g as usize % 4];
            let a = random_saaty_incomplete(n, m, &mut rng_for(2, g));
            if !a.graph().is_connected() {
                continue;
            }
            let opt = pcm_core::lambda_max(&cr_optimal_complete(&a).unwrap().matrix).unwrap();
            assert!(lambda_lower_bound(&a).unwrap() <= opt + 1e-9);
            assert!(lambda_min_lower_bound(&a, ROUGH_GRAD_TOL).unwrap() <= opt + 1e-9);
        }
    }

    #[test]
    fn quartiles() {
        let s = summarize_ici(&[1.0, 2.0, 3.0, 4.0, 20.0]);
        assert_eq!(s.median, 3.0);
        assert_eq!(s.min, 1.0);
        assert_eq!(s.max, 20.0);
        assert!((s.fraction_below_10 - 0.8).abs() < 1e-12);
        assert!(s.lower_quartile <= s.median && s.median <= s.upper_quartile);
    }
}
