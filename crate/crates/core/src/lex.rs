//! Lexicographically optimal completion.
//!
//! Every triad `ℓ = (i, j, k)` contributes the log cycle sum
//! `log a_ij + log a_jk - log a_ik`, which is affine in the logs of the missing
//! entries. The LP built by [`build_lp1`] bounds each cycle sum by
//! `-z_ℓ <= sum <= z_ℓ`, caps every still-active `z_ℓ` by a common `z` and
//! minimises `z`. [`lex_complete_with`] repeatedly solves it, picks one active
//! triad whose cap row has a non-zero dual, fixes that triad's bound at the
//! current optimum and removes it from the active set, until the optimum is 0.
//!
//! A non-zero dual on an active cap row means, by complementary slackness,
//! that the triad sits at the optimum level in every optimal solution. Each
//! candidate is still confirmed by minimising its own level with every other
//! active triad capped at the optimum before it is fixed.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lp::{self, ConstraintId, LpProblem, LpSolution, Relation};
use crate::math;
use crate::pcm::{all_triads, graph_of, theta_vector, CompletePcm, IncompletePcm, ThetaVector, Triad};

/// Log-scale optimum treated as zero.
pub const ZERO_LEVEL: f64 = 1e-9;
/// Dual magnitude treated as non-zero.
pub const DUAL_TOL: f64 = 1e-9;
/// Slack allowed when confirming that a candidate triad cannot go lower.
const CONFIRM_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Lexicographic,
    IndependentFastPath,
    EigenvalueOptimal,
    LogLeastSquares,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Lexicographic => "lex",
            Method::IndependentFastPath => "lex-fast",
            Method::EigenvalueOptimal => "eig",
            Method::LogLeastSquares => "lls",
        }
    }
}

/// One fixing step of the successive-LP loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceStep {
    pub iteration: usize,
    pub triad: Triad,
    /// The fixed level in TI units (`exp` of the LP optimum).
    pub level: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompletionResult {
    pub matrix: CompletePcm,
    pub theta: ThetaVector,
    pub trace: Vec<TraceStep>,
    pub method: Method,
    /// Set when the comparison graph is disconnected.
    pub non_unique: bool,
    /// Missing upper cells of the input with the values chosen for them.
    pub filled: Vec<((usize, usize), f64)>,
}

impl CompletionResult {
    pub fn new(
        input: &IncompletePcm,
        matrix: CompletePcm,
        method: Method,
        trace: Vec<TraceStep>,
        non_unique: bool,
    ) -> Result<Self> {
        let theta = if matrix.order() >= 3 {
            theta_vector(&matrix)?
        } else {
            ThetaVector::from_values(Vec::new())?
        };
        let filled = input.missing_cells().iter().map(|&(i, j)| ((i, j), matrix.get(i, j))).collect();
        Ok(Self { matrix, theta, trace, method, non_unique, filled })
    }

    pub fn filled_values(&self) -> Vec<f64> {
        self.filled.iter().map(|&(_, v)| v).collect()
    }
}

/// Active and fixed triads of the successive-LP loop.
#[derive(Debug, Clone, PartialEq)]
pub struct LexState {
    triads: Vec<Triad>,
    fixed: Vec<Option<f64>>,
    order: Vec<usize>,
    iteration: usize,
}

impl LexState {
    /// Every triad of order `n` active.
    pub fn new(n: usize) -> Self {
        let triads = all_triads(n);
        let fixed = vec![None; triads.len()];
        Self { triads, fixed, order: Vec::new(), iteration: 0 }
    }

    pub fn triads(&self) -> &[Triad] {
        &self.triads
    }

    pub fn is_active(&self, idx: usize) -> bool {
        self.fixed[idx].is_none()
    }

    pub fn active(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.triads.len()).filter(|&i| self.is_active(i))
    }

    /// Fixed bound (log scale) of a triad, if any.
    pub fn fixed_level(&self, idx: usize) -> Option<f64> {
        self.fixed[idx]
    }

    /// Triad indices in the order they were fixed.
    pub fn fixing_order(&self) -> &[usize] {
        &self.order
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    /// Moves triad `idx` from the active set to the fixed set at `level`
    /// (log scale). Levels are clamped so that they never increase.
    pub fn fix(&mut self, idx: usize, level: f64) -> Result<f64> {
        if !self.is_active(idx) {
            return Err(Error::Domain("triad is already fixed"));
        }
        let level = match self.order.last() {
            Some(&prev) => level.min(self.fixed[prev].unwrap_or(level)),
            None => level,
        }
        .max(0.0);
        self.fixed[idx] = Some(level);
        self.order.push(idx);
        self.iteration += 1;
        Ok(level)
    }
}

/// The LP of one iteration together with its variable and row layout.
///
/// Variables are ordered: logs of the missing cells (same order as
/// [`IncompletePcm::missing_cells`]), then one `z_ℓ` per included triad,
/// then `z`.
#[derive(Debug, Clone)]
pub struct Lp1 {
    pub problem: LpProblem,
    /// Indices (into [`LexState::triads`]) of the triads in this LP.
    pub triads: Vec<usize>,
    pub level_vars: Vec<usize>,
    pub z_var: usize,
    /// `sum - z_ℓ <= 0` and `-sum - z_ℓ <= 0` for each included triad.
    pub cycle_rows: Vec<[ConstraintId; 2]>,
    /// `z_ℓ <= z` (active) or `z_ℓ <= level` (fixed) for each included triad.
    pub cap_rows: Vec<ConstraintId>,
}

impl Lp1 {
    pub fn missing_logs<'a>(&self, sol: &'a LpSolution, m: usize) -> &'a [f64] {
        &sol.primal[..m]
    }
}

/// Constant part and variable terms of a triad's log cycle sum.
fn cycle_terms(matrix: &IncompletePcm, t: Triad) -> (f64, Vec<(usize, f64)>) {
    let mut constant = 0.0;
    let mut terms = Vec::new();
    for (&(a, b), sign) in t.cells().iter().zip([1.0, 1.0, -1.0]) {
        match matrix.get(a, b) {
            Some(v) => constant += sign * math::ln(v),
            None => terms.push((matrix.missing_index(a, b).expect("missing cell is indexed"), sign)),
        }
    }
    (constant, terms)
}

/// Builds the LP over every triad of the matrix.
pub fn build_lp1(matrix: &IncompletePcm, state: &LexState) -> Result<Lp1> {
    check_state(matrix, state)?;
    let all: Vec<usize> = (0..state.triads.len()).collect();
    Ok(build_over(matrix, state, &all))
}

fn check_state(matrix: &IncompletePcm, state: &LexState) -> Result<()> {
    if matrix.order() < 3 {
        return Err(Error::BadOrder { got: matrix.order(), min: 3 });
    }
    if state.triads.len() != all_triads(matrix.order()).len() {
        return Err(Error::LengthMismatch { left: state.triads.len(), right: all_triads(matrix.order()).len() });
    }
    Ok(())
}

fn build_over(matrix: &IncompletePcm, state: &LexState, include: &[usize]) -> Lp1 {
    let m = matrix.missing_count();
    let num_vars = m + include.len() + 1;
    let z_var = num_vars - 1;
    let mut problem = LpProblem::new(num_vars);
    for p in 0..m {
        problem.set_free(p);
    }
    problem.set_objective_coeff(z_var, 1.0);

    let mut level_vars = Vec::with_capacity(include.len());
    let mut cycle_rows = Vec::with_capacity(include.len());
    for (slot, &idx) in include.iter().enumerate() {
        let zl = m + slot;
        level_vars.push(zl);
        let (constant, terms) = cycle_terms(matrix, state.triads[idx]);
        let mut up: Vec<(usize, f64)> = terms.clone();
        up.push((zl, -1.0));
        let mut down: Vec<(usize, f64)> = terms.iter().map(|&(v, s)| (v, -s)).collect();
        down.push((zl, -1.0));
        let r1 = problem.add_sparse(&up, Relation::Le, -constant);
        let r2 = problem.add_sparse(&down, Relation::Le, constant);
        cycle_rows.push([r1, r2]);
    }
    let mut cap_rows = Vec::with_capacity(include.len());
    for (slot, &idx) in include.iter().enumerate() {
        let zl = level_vars[slot];
        let row = match state.fixed[idx] {
            None => problem.add_sparse(&[(zl, 1.0), (z_var, -1.0)], Relation::Le, 0.0),
            Some(level) => problem.add_sparse(&[(zl, 1.0)], Relation::Le, level),
        };
        cap_rows.push(row);
    }
    Lp1 { problem, triads: include.to_vec(), level_vars, z_var, cycle_rows, cap_rows }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Fix the candidate with the smallest canonical triad index.
    #[default]
    Lowest,
    /// Fix the candidate with the largest index.
    Highest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LexOptions {
    pub tie_break: TieBreak,
    /// Handle triads without missing entries outside the LP. Their cycle sums
    /// are constants, so this changes neither the optima nor the fixing order,
    /// only the LP size.
    pub fold_known_triads: bool,
}

impl Default for LexOptions {
    fn default() -> Self {
        Self { tie_break: TieBreak::Lowest, fold_known_triads: true }
    }
}

pub fn lex_complete(matrix: &IncompletePcm) -> Result<CompletionResult> {
    lex_complete_with(matrix, &LexOptions::default())
}

fn solve_optimal(problem: &LpProblem) -> Result<LpSolution> {
    let sol = lp::solve(problem)?;
    if sol.is_optimal() {
        Ok(sol)
    } else {
        Err(Error::Numeric("completion LP has no optimum"))
    }
}

/// Checks that triad `slot` of `lp` cannot get below `level` while every
/// active triad stays at or below `level`.
fn confirm_stuck(lp: &Lp1, slot: usize, level: f64) -> Result<bool> {
    let mut probe = lp.problem.clone();
    let mut c = vec![0.0; probe.num_vars()];
    c[lp.level_vars[slot]] = 1.0;
    probe.set_objective(c)?;
    probe.set_bounds(lp.z_var, 0.0, level.max(0.0));
    let sol = lp::solve(&probe)?;
    Ok(sol.is_optimal() && sol.objective_value >= level - CONFIRM_TOL)
}

pub fn lex_complete_with(matrix: &IncompletePcm, opts: &LexOptions) -> Result<CompletionResult> {
    let n = matrix.order();
    let mut state = LexState::new(n);
    check_state(matrix, &state)?;
    let m = matrix.missing_count();
    let triad_count = state.triads.len();

    // Known triads have a constant |cycle sum|.
    let mut known_level = vec![None; triad_count];
    let mut in_lp = Vec::new();
    for (idx, &t) in state.triads.iter().enumerate() {
        let (constant, terms) = cycle_terms(matrix, t);
        if opts.fold_known_triads && terms.is_empty() {
            known_level[idx] = Some(math::abs(constant));
        } else {
            in_lp.push(idx);
        }
    }

    let prefer = |a: usize, b: usize| match opts.tie_break {
        TieBreak::Lowest => a < b,
        TieBreak::Highest => a > b,
    };

    let mut trace = Vec::new();
    let mut cached: Option<(Lp1, LpSolution)> = None;
    for _ in 0..=triad_count {
        if cached.is_none() {
            let lp = build_over(matrix, &state, &in_lp);
            let sol = solve_optimal(&lp.problem)?;
            cached = Some((lp, sol));
        }
        let (lp, sol) = cached.as_ref().expect("solved above");
        let lp_obj = sol.objective_value.max(0.0);
        let known_obj = state
            .active()
            .filter_map(|i| known_level[i])
            .fold(0.0f64, f64::max);
        let obj = lp_obj.max(known_obj);
        if obj <= ZERO_LEVEL {
            break;
        }

        // Candidates: known triads at the optimum, LP triads with a non-zero cap dual.
        let mut best: Option<(usize, Option<usize>)> = None;
        let consider = |idx: usize, slot: Option<usize>, best: &mut Option<(usize, Option<usize>)>| {
            if best.is_none_or(|(b, _)| prefer(idx, b)) {
                *best = Some((idx, slot));
            }
        };
        for i in state.active() {
            if let Some(level) = known_level[i] {
                if level >= obj - ZERO_LEVEL {
                    consider(i, None, &mut best);
                }
            }
        }
        let lp_candidates: Vec<usize> = if lp_obj >= obj - ZERO_LEVEL {
            (0..lp.triads.len())
                .filter(|&s| state.is_active(lp.triads[s]) && math::abs(sol.dual(lp.cap_rows[s])) > DUAL_TOL)
                .collect()
        } else {
            Vec::new()
        };
        let mut ordered = lp_candidates.clone();
        ordered.sort_by(|&a, &b| {
            let (ia, ib) = (lp.triads[a], lp.triads[b]);
            if prefer(ia, ib) {
                core::cmp::Ordering::Less
            } else {
                core::cmp::Ordering::Greater
            }
        });
        // Only confirm LP candidates that would win the tie-break.
        let mut chosen_lp = None;
        for &s in &ordered {
            if let Some((b, _)) = best {
                if !prefer(lp.triads[s], b) {
                    break;
                }
            }
            if confirm_stuck(lp, s, lp_obj)? {
                chosen_lp = Some(s);
                break;
            }
        }
        if let Some(s) = chosen_lp {
            consider(lp.triads[s], Some(s), &mut best);
        }
        if best.is_none() && lp_obj >= obj - ZERO_LEVEL {
            // Duals were unusable; fall back to testing every active LP triad.
            for s in 0..lp.triads.len() {
                if state.is_active(lp.triads[s]) && confirm_stuck(lp, s, lp_obj)? {
                    consider(lp.triads[s], Some(s), &mut best);
                    break;
                }
            }
        }
        let Some((idx, slot)) = best else {
            return Err(Error::Numeric("no triad could be fixed at the current optimum"));
        };
        let level = state.fix(idx, obj)?;
        trace.push(TraceStep { iteration: state.iteration(), triad: state.triads[idx], level: math::exp(level) });
        if slot.is_some() {
            cached = None;
        }
    }
    let (lp, sol) = match cached {
        Some(c) => c,
        None => {
            let lp = build_over(matrix, &state, &in_lp);
            let sol = solve_optimal(&lp.problem)?;
            (lp, sol)
        }
    };
    let mut logs = lp.missing_logs(&sol, m).to_vec();

    let graph = graph_of(matrix);
    let non_unique = !graph.is_connected();
    if non_unique {
        center_components(matrix, &graph.components(), &mut logs)?;
    }
    let completed = matrix.fill_log(&logs)?;
    CompletionResult::new(matrix, completed, Method::Lexicographic, trace, non_unique)
}

/// Shifts each component's cross-component log entries so that their least
/// squares size is minimal; for two components this makes the geometric mean
/// of the cross entries (oriented from the first block) equal to 1. Triad
/// inconsistencies are unchanged by such shifts.
fn center_components(matrix: &IncompletePcm, comp: &[usize], logs: &mut [f64]) -> Result<()> {
    let k = comp.iter().copied().max().map_or(0, |c| c + 1);
    if k < 2 {
        return Ok(());
    }
    // Unknowns s_1..s_{k-1}, s_0 = 0; residual y_e + s_a - s_b.
    let dim = k - 1;
    let mut a = vec![0.0; dim * dim];
    let mut b = vec![0.0; dim];
    for (p, &(i, j)) in matrix.missing_cells().iter().enumerate() {
        let (ca, cb) = (comp[i], comp[j]);
        if ca == cb {
            continue;
        }
        let y = logs[p];
        // gradient of (y + s_a - s_b)^2 w.r.t. s_a is +, w.r.t. s_b is -
        for (c, sign) in [(ca, 1.0), (cb, -1.0)] {
            if c == 0 {
                continue;
            }
            let r = c - 1;
            b[r] -= sign * y;
            for (c2, sign2) in [(ca, 1.0), (cb, -1.0)] {
                if c2 != 0 {
                    a[r * dim + (c2 - 1)] += sign * sign2;
                }
            }
        }
    }
    let s = math::solve_linear(&mut a, &mut b, dim)?;
    let shift = |c: usize| if c == 0 { 0.0 } else { s[c - 1] };
    for (p, &(i, j)) in matrix.missing_cells().iter().enumerate() {
        if comp[i] != comp[j] {
            logs[p] += shift(comp[i]) - shift(comp[j]);
        }
    }
    Ok(())
}

/// Closed-form completion when no two missing entries share an alternative.
///
/// Each missing `(i, j)` only appears in the triads `(i, j, k)`; their
/// inconsistencies are `|log c_k - log x|` with `c_k = a_ik a_kj`, so the
/// lexicographic optimum is the midpoint `x = sqrt(min c_k · max c_k)` of the
/// upper envelope's minimum.
pub fn independent_fast_path(matrix: &IncompletePcm) -> Result<CompletionResult> {
    let n = matrix.order();
    if n < 3 {
        return Err(Error::BadOrder { got: n, min: 3 });
    }
    let cells = matrix.missing_cells();
    for (p, &a) in cells.iter().enumerate() {
        for &b in &cells[p + 1..] {
            if a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1 {
                return Err(Error::NotIndependent { first: a, second: b });
            }
        }
    }
    let mut values = Vec::with_capacity(cells.len());
    for &(i, j) in cells {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for k in (0..n).filter(|&k| k != i && k != j) {
            if let (Some(x), Some(y)) = (matrix.get(i, k), matrix.get(k, j)) {
                let c = x * y;
                lo = lo.min(c);
                hi = hi.max(c);
            }
        }
        if !lo.is_finite() {
            return Err(Error::NonUnique);
        }
        values.push(math::sqrt(lo * hi));
    }
    let completed = matrix.fill(&values)?;
    let non_unique = !graph_of(matrix).is_connected();

    // Fixing order of the successive LPs: triads by decreasing level.
    let mut levels: Vec<(usize, Triad, f64)> = all_triads(n)
        .into_iter()
        .enumerate()
        .map(|(idx, t)| (idx, t, completed.triad_ti(t)))
        .filter(|&(_, _, v)| math::ln(v) > ZERO_LEVEL)
        .collect();
    levels.sort_by(|a, b| b.2.total_cmp(&a.2).then(a.0.cmp(&b.0)));
    let trace = levels
        .into_iter()
        .enumerate()
        .map(|(it, (_, triad, level))| TraceStep { iteration: it + 1, triad, level })
        .collect();
    CompletionResult::new(matrix, completed, Method::IndependentFastPath, trace, non_unique)
}

/// Whether the lexicographically optimal completion is unique, which holds
/// exactly when the comparison graph is connected. Only the pattern of known
/// cells is read.
pub fn check_uniqueness(matrix: &IncompletePcm) -> bool {
    graph_of(matrix).is_connected()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcm::matrix_ti;

    fn example2() -> IncompletePcm {
        IncompletePcm::from_upper(4, |i, j| match (i, j) {
            (0, 1) => Some(2.0),
            (1, 2) => Some(1.0),
            (1, 3) => Some(8.0),
            (2, 3) => Some(1.0),
            _ => None,
        })
        .unwrap()
    }

    #[test]
    fn lp1_structure() {
        let a = example2();
        let lp = build_lp1(&a, &LexState::new(4)).unwrap();
        assert_eq!(lp.problem.num_vars(), 2 + 4 + 1);
        assert_eq!(lp.cycle_rows.len() * 2, 8);
        assert_eq!(lp.cap_rows.len(), 4);
        assert_eq!(lp.problem.bounds(0), (f64::NEG_INFINITY, f64::INFINITY));
        assert_eq!(lp.problem.bounds(lp.z_var), (0.0, f64::INFINITY));
    }

    #[test]
    fn lp1_without_missing_entries_gives_matrix_ti() {
        let upper = [[0.0, 2.0, 3.0, 0.5], [0.0, 0.0, 7.0, 1.0], [0.0, 0.0, 0.0, 4.0]];
        let full = CompletePcm::from_upper(4, |i, j| upper[i][j]).unwrap();
        let inc = IncompletePcm::from(&full);
        let lp = build_lp1(&inc, &LexState::new(4)).unwrap();
        let sol = lp::solve(&lp.problem).unwrap();
        assert!((sol.objective_value - matrix_ti(&full).unwrap().ln()).abs() < 1e-12);
    }

    #[test]
    fn single_missing_entry_is_consistent() {
        let a = IncompletePcm::from_upper(3, |i, j| match (i, j) {
            (0, 1) => Some(3.0),
            (1, 2) => Some(0.5),
            _ => None,
        })
        .unwrap();
        let lp = build_lp1(&a, &LexState::new(3)).unwrap();
        let sol = lp::solve(&lp.problem).unwrap();
        assert!(sol.objective_value.abs() < 1e-12);
        assert!((sol.primal[0] - 1.5f64.ln()).abs() < 1e-12);
        let r = lex_complete(&a).unwrap();
        assert!((r.matrix.get(0, 2) - 1.5).abs() < 1e-12);
        assert!(r.trace.is_empty());
    }

    #[test]
    fn example3_completion() {
        let r = lex_complete(&example2()).unwrap();
        assert!((r.matrix.get(0, 2) - 4.0).abs() < 1e-9);
        assert!((r.matrix.get(0, 3) - 8.0).abs() < 1e-9);
        assert!(!r.non_unique);
        assert_eq!(r.trace[0].triad, Triad { i: 1, j: 2, k: 3 });
        assert!((r.trace[0].level - 8.0).abs() < 1e-9);
    }

    #[test]
    fn unfolded_matches_folded() {
        let opts = LexOptions { fold_known_triads: false, ..Default::default() };
        let a = lex_complete_with(&example2(), &opts).unwrap();
        let b = lex_complete(&example2()).unwrap();
        assert_eq!(a.trace.len(), b.trace.len());
        for (x, y) in a.filled_values().iter().zip(b.filled_values()) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn state_levels_never_increase() {
        let mut s = LexState::new(4);
        assert_eq!(s.fix(0, 2.0).unwrap(), 2.0);
        assert_eq!(s.fix(1, 2.0 + 1e-15).unwrap(), 2.0);
        assert!(s.fix(1, 1.0).is_err());
        assert_eq!(s.active().count(), 2);
        assert_eq!(s.fixing_order(), &[0, 1]);
    }

    #[test]
    fn fast_path_rejects_dependent_entries() {
        assert!(matches!(independent_fast_path(&example2()), Err(Error::NotIndependent { .. })));
    }

    #[test]
    fn fast_path_flat_envelope() {
        let w = [1.0, 2.0, 4.0, 3.0, 5.0];
        let a = IncompletePcm::from_upper(5, |i, j| if (i, j) == (0, 4) { None } else { Some(w[i] / w[j]) }).unwrap();
        let r = independent_fast_path(&a).unwrap();
        assert!((r.matrix.get(0, 4) - 0.2).abs() < 1e-12);
        assert!(r.theta.values().iter().all(|&v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn fast_path_two_products() {
        // c values {2, 8} -> 4
        let a = IncompletePcm::from_upper(4, |i, j| match (i, j) {
            (0, 3) => None,
            (0, 1) => Some(1.0),
            (1, 3) => Some(2.0),
            (0, 2) => Some(2.0),
            (2, 3) => Some(4.0),
            _ => Some(1.0),
        })
        .unwrap();
        let r = independent_fast_path(&a).unwrap();
        assert!((r.matrix.get(0, 3) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn uniqueness_from_pattern() {
        assert!(check_uniqueness(&example2()));
        let block = IncompletePcm::from_upper(4, |i, j| if (i < 2) == (j < 2) { Some(3.0) } else { None }).unwrap();
        assert!(!check_uniqueness(&block));
        let full = IncompletePcm::from_upper(4, |_, _| Some(2.0)).unwrap();
        assert!(check_uniqueness(&full));
    }

    #[test]
    fn disconnected_is_flagged_and_centered() {
        let block = IncompletePcm::from_upper(4, |i, j| match (i, j) {
            (0, 1) => Some(3.0),
            (2, 3) => Some(0.5),
            _ => None,
        })
        .unwrap();
        let r = lex_complete(&block).unwrap();
        assert!(r.non_unique);
        let mean: f64 = [(0, 2), (0, 3), (1, 2), (1, 3)].iter().map(|&(i, j)| r.matrix.get(i, j).ln()).sum::<f64>() / 4.0;
        assert!(mean.abs() < 1e-9);
    }

    #[test]
    fn order_below_three_is_rejected() {
        let a = IncompletePcm::from_upper(2, |_, _| None).unwrap();
        assert!(matches!(lex_complete(&a), Err(Error::BadOrder { .. })));
    }
}
