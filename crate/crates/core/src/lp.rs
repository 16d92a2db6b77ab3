//! Dense two-phase simplex for small linear programs.
//!
//! Problems are always minimisations of `c·x` subject to rows
//! `a_i·x (<=|>=|=) b_i` and per-variable bounds `lo_j <= x_j <= hi_j`
//! (either side may be infinite).
//!
//! # Dual sign convention
//!
//! Duals are the multipliers `y` of the Lagrangian `c·x - Σ y_i (a_i·x - b_i)`.
//! At an optimum:
//!
//! - a `<=` row has `y_i <= 0`, a `>=` row has `y_i >= 0`, an `=` row is free;
//! - the reduced cost `r = c - Aᵀy` is `>= 0` on variables at their lower
//!   bound, `<= 0` at their upper bound and `0` on variables strictly inside;
//! - `c·x = b·y + Σ_j r_j·bound_j`, see [`LpProblem::dual_objective`].
//!
//! So a `<=` row that limits the optimum carries a non-positive dual.
//!
//! Pricing is Dantzig's rule; after a run of degenerate pivots the solver
//! switches to Bland's rule for the rest of the phase, which rules out
//! cycling. Every choice is deterministic, so the same input always produces
//! bit-identical output.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::math;

pub const FEASIBILITY_TOL: f64 = 1e-9;
pub const OPTIMALITY_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const DEGENERATE_STREAK: usize = 50;
const MAX_PIVOTS: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// Index of a constraint in insertion order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConstraintId(pub usize);

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    num_vars: usize,
    objective: Vec<f64>,
    constraints: Vec<Constraint>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl LpProblem {
    /// A problem with a zero objective and every variable in `[0, +inf)`.
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            objective: vec![0.0; num_vars],
            constraints: Vec::new(),
            lower: vec![0.0; num_vars],
            upper: vec![f64::INFINITY; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn bounds(&self, var: usize) -> (f64, f64) {
        (self.lower[var], self.upper[var])
    }

    pub fn set_objective(&mut self, coeffs: Vec<f64>) -> Result<()> {
        if coeffs.len() != self.num_vars {
            return Err(Error::LengthMismatch { left: coeffs.len(), right: self.num_vars });
        }
        self.objective = coeffs;
        Ok(())
    }

    pub fn set_objective_coeff(&mut self, var: usize, c: f64) {
        self.objective[var] = c;
    }

    /// Use `f64::NEG_INFINITY` / `f64::INFINITY` for a missing side.
    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    pub fn set_free(&mut self, var: usize) {
        self.set_bounds(var, f64::NEG_INFINITY, f64::INFINITY);
    }

    pub fn add_constraint(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Result<ConstraintId> {
        if coeffs.len() != self.num_vars {
            return Err(Error::LengthMismatch { left: coeffs.len(), right: self.num_vars });
        }
        self.constraints.push(Constraint { coeffs, relation, rhs });
        Ok(ConstraintId(self.constraints.len() - 1))
    }

    /// Adds a row given as `(variable, coefficient)` pairs; repeated variables add up.
    pub fn add_sparse(&mut self, terms: &[(usize, f64)], relation: Relation, rhs: f64) -> ConstraintId {
        let mut coeffs = vec![0.0; self.num_vars];
        for &(v, c) in terms {
            coeffs[v] += c;
        }
        self.constraints.push(Constraint { coeffs, relation, rhs });
        ConstraintId(self.constraints.len() - 1)
    }

    /// Value of `a_i·x` for every row.
    pub fn row_activity(&self, x: &[f64]) -> Vec<f64> {
        self.constraints
            .iter()
            .map(|c| c.coeffs.iter().zip(x).map(|(a, v)| a * v).sum())
            .collect()
    }

    /// Largest violation of any row or bound by `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for (c, act) in self.constraints.iter().zip(self.row_activity(x)) {
            let v = match c.relation {
                Relation::Le => act - c.rhs,
                Relation::Ge => c.rhs - act,
                Relation::Eq => math::abs(act - c.rhs),
            };
            worst = worst.max(v);
        }
        for ((&v, lo), hi) in x.iter().zip(&self.lower).zip(&self.upper) {
            worst = worst.max(lo - v).max(v - hi);
        }
        worst
    }

    /// Reduced costs `c - Aᵀy`.
    pub fn reduced_costs(&self, duals: &[f64]) -> Vec<f64> {
        let mut r = self.objective.clone();
        for (c, &y) in self.constraints.iter().zip(duals) {
            for (rj, a) in r.iter_mut().zip(&c.coeffs) {
                *rj -= y * a;
            }
        }
        r
    }

    /// Dual objective `b·y + Σ_j r_j·bound_j`, taking the lower bound where
    /// `r_j > 0` and the upper bound where `r_j < 0`. Returns `-inf` if the
    /// needed bound is infinite (the duals are not feasible then).
    pub fn dual_objective(&self, duals: &[f64]) -> f64 {
        let mut total: f64 = self.constraints.iter().zip(duals).map(|(c, y)| c.rhs * y).sum();
        for (j, r) in self.reduced_costs(duals).into_iter().enumerate() {
            if math::abs(r) <= OPTIMALITY_TOL {
                continue;
            }
            let bound = if r > 0.0 { self.lower[j] } else { self.upper[j] };
            if !bound.is_finite() {
                return f64::NEG_INFINITY;
            }
            total += r * bound;
        }
        total
    }

    fn validate(&self) -> Result<()> {
        let finite = |v: &f64| v.is_finite();
        if !self.objective.iter().all(finite) {
            return Err(Error::Domain("objective coefficients must be finite"));
        }
        for c in &self.constraints {
            if !c.coeffs.iter().all(finite) || !c.rhs.is_finite() {
                return Err(Error::Domain("constraint data must be finite"));
            }
        }
        for j in 0..self.num_vars {
            if self.lower[j].is_nan() || self.upper[j].is_nan() || self.lower[j] > self.upper[j] {
                return Err(Error::Domain("invalid variable bounds"));
            }
            if self.lower[j] == f64::INFINITY || self.upper[j] == f64::NEG_INFINITY {
                return Err(Error::Domain("invalid variable bounds"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Meaningful only when `status` is `Optimal`.
    pub objective_value: f64,
    pub primal: Vec<f64>,
    /// One dual per constraint, indexed by [`ConstraintId`].
    pub duals: Vec<f64>,
}

impl LpSolution {
    pub fn dual(&self, id: ConstraintId) -> f64 {
        self.duals[id.0]
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    fn without_optimum(status: LpStatus, num_vars: usize, num_rows: usize) -> Self {
        Self {
            status,
            objective_value: f64::NAN,
            primal: vec![f64::NAN; num_vars],
            duals: vec![f64::NAN; num_rows],
        }
    }
}

pub fn solve(problem: &LpProblem) -> Result<LpSolution> {
    Simplex::build(problem)?.run(problem, None)
}

/// Like [`solve`], and also writes the tableau after each phase to `out`.
pub fn solve_traced(problem: &LpProblem, out: &mut dyn fmt::Write) -> Result<LpSolution> {
    Simplex::build(problem)?.run(problem, Some(out))
}

/// How an original variable is expressed through non-negative columns.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    /// `x = offset + sign * col`
    Single { col: usize, offset: f64, sign: f64 },
    /// `x = pos - neg`
    Split { pos: usize, neg: usize },
}

struct Simplex {
    rows: usize,
    width: usize,
    /// `(rows + 1) x width`, last column is the right-hand side and the last
    /// row holds reduced costs (its rhs cell is minus the objective).
    t: Vec<f64>,
    basis: Vec<usize>,
    first_artificial: usize,
    /// Column holding the identity for each row (slack or artificial).
    identity_col: Vec<usize>,
    /// `-1` if the row was negated to make its rhs non-negative.
    row_sign: Vec<f64>,
    user_rows: usize,
    vars: Vec<VarMap>,
    cost: Vec<f64>,
}

impl Simplex {
    fn build(p: &LpProblem) -> Result<Self> {
        p.validate()?;
        let mut vars = Vec::with_capacity(p.num_vars);
        let mut col = 0;
        // (var column, upper limit) for doubly bounded variables
        let mut bound_rows = Vec::new();
        for j in 0..p.num_vars {
            let (lo, hi) = (p.lower[j], p.upper[j]);
            if lo.is_finite() {
                vars.push(VarMap::Single { col, offset: lo, sign: 1.0 });
                if hi.is_finite() {
                    bound_rows.push((col, hi - lo));
                }
                col += 1;
            } else if hi.is_finite() {
                vars.push(VarMap::Single { col, offset: hi, sign: -1.0 });
                col += 1;
            } else {
                vars.push(VarMap::Split { pos: col, neg: col + 1 });
                col += 2;
            }
        }
        let structural = col;

        // Rows in transformed column space, before sign normalisation.
        let mut dense_rows: Vec<(Vec<f64>, Relation, f64)> = Vec::new();
        for c in &p.constraints {
            let mut row = vec![0.0; structural];
            let mut rhs = c.rhs;
            for (j, &a) in c.coeffs.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                match vars[j] {
                    VarMap::Single { col, offset, sign } => {
                        row[col] += a * sign;
                        rhs -= a * offset;
                    }
                    VarMap::Split { pos, neg } => {
                        row[pos] += a;
                        row[neg] -= a;
                    }
                }
            }
            dense_rows.push((row, c.relation, rhs));
        }
        for &(col, limit) in &bound_rows {
            let mut row = vec![0.0; structural];
            row[col] = 1.0;
            dense_rows.push((row, Relation::Le, limit));
        }

        let rows = dense_rows.len();
        let mut row_sign = vec![1.0; rows];
        let mut relations = Vec::with_capacity(rows);
        for (i, (row, rel, rhs)) in dense_rows.iter_mut().enumerate() {
            if *rhs < 0.0 {
                row_sign[i] = -1.0;
                row.iter_mut().for_each(|v| *v = -*v);
                *rhs = -*rhs;
                *rel = match *rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            relations.push(*rel);
        }

        let slack_count = relations.iter().filter(|r| **r != Relation::Eq).count();
        let art_count = relations.iter().filter(|r| **r != Relation::Le).count();
        let first_slack = structural;
        let first_artificial = structural + slack_count;
        let cols = first_artificial + art_count;
        let width = cols + 1;
        let mut t = vec![0.0; (rows + 1) * width];
        let mut basis = vec![0; rows];
        let mut identity_col = vec![0; rows];
        let (mut s, mut a) = (first_slack, first_artificial);
        for (i, (row, rel, rhs)) in dense_rows.iter().enumerate() {
            let base = i * width;
            t[base..base + structural].copy_from_slice(row);
            t[base + cols] = *rhs;
            match rel {
                Relation::Le => {
                    t[base + s] = 1.0;
                    basis[i] = s;
                    identity_col[i] = s;
                    s += 1;
                }
                Relation::Ge => {
                    t[base + s] = -1.0;
                    t[base + a] = 1.0;
                    basis[i] = a;
                    identity_col[i] = a;
                    s += 1;
                    a += 1;
                }
                Relation::Eq => {
                    t[base + a] = 1.0;
                    basis[i] = a;
                    identity_col[i] = a;
                    a += 1;
                }
            }
        }

        let mut cost = vec![0.0; structural];
        for (j, &c) in p.objective.iter().enumerate() {
            match vars[j] {
                VarMap::Single { col, sign, .. } => {
                    cost[col] += c * sign;
                }
                VarMap::Split { pos, neg } => {
                    cost[pos] += c;
                    cost[neg] -= c;
                }
            }
        }

        Ok(Self {
            rows,
            width,
            t,
            basis,
            first_artificial,
            identity_col,
            row_sign,
            user_rows: p.constraints.len(),
            vars,
            cost,
        })
    }

    #[inline]
    fn at(&self, r: usize, c: usize) -> f64 {
        self.t[r * self.width + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.width - 1)
    }

    fn cost_row(&self) -> usize {
        self.rows
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width;
        let p = self.t[r * w + c];
        let (before, rest) = self.t.split_at_mut(r * w);
        let (prow, after) = rest.split_at_mut(w);
        for v in prow.iter_mut() {
            *v /= p;
        }
        prow[c] = 1.0;
        for row in before.chunks_mut(w).chain(after.chunks_mut(w)) {
            let f = row[c];
            if f != 0.0 {
                for (x, &y) in row.iter_mut().zip(prow.iter()) {
                    *x -= f * y;
                }
                row[c] = 0.0;
            }
        }
        self.basis[r] = c;
    }

    /// Runs simplex iterations on the current cost row over columns `< limit`.
    fn iterate(&mut self, limit: usize, pivots: &mut usize) -> Result<bool> {
        let cr = self.cost_row();
        let mut bland = false;
        let mut streak = 0;
        loop {
            let mut enter = None;
            let mut best = -OPTIMALITY_TOL;
            for j in 0..limit {
                let d = self.at(cr, j);
                if d < best {
                    enter = Some(j);
                    if bland {
                        break;
                    }
                    best = d;
                }
            }
            let Some(c) = enter else { return Ok(true) };

            let mut leave: Option<(usize, f64, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, c);
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.rhs(r).max(0.0) / a;
                let better = match leave {
                    None => true,
                    Some((lr, lratio, la)) => {
                        if ratio < lratio - 1e-12 {
                            true
                        } else if ratio <= lratio + 1e-12 {
                            if bland {
                                self.basis[r] < self.basis[lr]
                            } else {
                                a > la
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    leave = Some((r, ratio, a));
                }
            }
            let Some((r, ratio, _)) = leave else { return Ok(false) };

            if ratio <= 1e-12 {
                streak += 1;
                if streak >= DEGENERATE_STREAK {
                    bland = true;
                }
            } else {
                streak = 0;
            }
            self.pivot(r, c);
            *pivots += 1;
            if *pivots > MAX_PIVOTS {
                return Err(Error::Numeric("simplex pivot limit exceeded"));
            }
        }
    }

    fn set_cost_row(&mut self, costs: &[f64]) {
        let w = self.width;
        let cr = self.cost_row();
        for j in 0..w {
            self.t[cr * w + j] = costs.get(j).copied().unwrap_or(0.0);
        }
        for r in 0..self.rows {
            let cb = costs.get(self.basis[r]).copied().unwrap_or(0.0);
            if cb != 0.0 {
                for j in 0..w {
                    let v = self.t[r * w + j];
                    self.t[cr * w + j] -= cb * v;
                }
            }
        }
    }

    fn dump(&self, out: &mut dyn fmt::Write, label: &str) {
        let _ = writeln!(out, "-- {label}: {} rows x {} columns", self.rows, self.width - 1);
        for r in 0..=self.rows {
            let tag = if r < self.rows { alloc::format!("x{:<4}", self.basis[r]) } else { alloc::string::String::from("cost ") };
            let _ = write!(out, "{tag}");
            for c in 0..self.width {
                let _ = write!(out, " {:>10.4}", self.at(r, c));
            }
            let _ = writeln!(out);
        }
    }

    fn run(mut self, p: &LpProblem, mut out: Option<&mut dyn fmt::Write>) -> Result<LpSolution> {
        let cols = self.width - 1;
        let mut pivots = 0;

        if self.first_artificial < cols {
            let mut phase1 = vec![0.0; cols];
            phase1[self.first_artificial..cols].iter_mut().for_each(|v| *v = 1.0);
            self.set_cost_row(&phase1);
            self.iterate(cols, &mut pivots)?;
            if let Some(o) = out.as_deref_mut() {
                self.dump(o, "phase 1");
            }
            let infeasibility = -self.rhs(self.cost_row());
            if infeasibility > FEASIBILITY_TOL {
                return Ok(LpSolution::without_optimum(LpStatus::Infeasible, p.num_vars, self.user_rows));
            }
            // Drive remaining (zero-valued) artificials out of the basis.
            for r in 0..self.rows {
                if self.basis[r] < self.first_artificial {
                    continue;
                }
                let mut best: Option<(usize, f64)> = None;
                for j in 0..self.first_artificial {
                    let a = math::abs(self.at(r, j));
                    if a > PIVOT_TOL && best.is_none_or(|(_, b)| a > b) {
                        best = Some((j, a));
                    }
                }
                if let Some((j, _)) = best {
                    self.pivot(r, j);
                }
            }
        }

        let mut phase2 = self.cost.clone();
        phase2.resize(cols, 0.0);
        self.set_cost_row(&phase2);
        let bounded = self.iterate(self.first_artificial, &mut pivots)?;
        if let Some(o) = out {
            self.dump(o, "phase 2");
        }
        if !bounded {
            return Ok(LpSolution::without_optimum(LpStatus::Unbounded, p.num_vars, self.user_rows));
        }

        let mut colval = vec![0.0; cols];
        for r in 0..self.rows {
            colval[self.basis[r]] = self.rhs(r).max(0.0);
        }
        let primal: Vec<f64> = self
            .vars
            .iter()
            .map(|m| match *m {
                VarMap::Single { col, offset, sign } => offset + sign * colval[col],
                VarMap::Split { pos, neg } => colval[pos] - colval[neg],
            })
            .collect();
        let cr = self.cost_row();
        let duals = (0..self.user_rows)
            .map(|i| -self.at(cr, self.identity_col[i]) * self.row_sign[i])
            .collect();
        let objective_value = p.objective.iter().zip(&primal).map(|(c, x)| c * x).sum();
        Ok(LpSolution { status: LpStatus::Optimal, objective_value, primal, duals })
    }
}
