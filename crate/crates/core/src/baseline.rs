//! Eigenvalue-optimal and logarithmic least squares completions, and the
//! eigenvector / row geometric mean weights.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lex::{CompletionResult, Method};
use crate::math;
use crate::pcm::{graph_of, CompletePcm, IncompletePcm};

const PERRON_TOL: f64 = 1e-12;
const PERRON_MAX_ITER: usize = 10_000;

/// Search range for a missing entry in the eigenvalue-optimal completion.
pub const CR_SEARCH_MAX: f64 = 9999.0;
const CR_GRAD_TOL: f64 = 1e-11;
const CR_STEP_TOL: f64 = 1e-13;
const CR_MAX_ITER: usize = 10_000;
const CR_LINE_ITER: usize = 60;
/// A line search ends once the directional derivative is this small
/// relative to its start value.
const LINE_SEARCH_SHRINK: f64 = 0.01;

/// Positive weights normalised to sum to 100.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn from_raw(raw: &[f64]) -> Result<Self> {
        if raw.is_empty() || raw.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::Domain("weights must be positive and finite"));
        }
        let total: f64 = raw.iter().sum();
        Ok(Self(raw.iter().map(|v| 100.0 * v / total).collect()))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// Alternative indices sorted by decreasing weight (stable for ties).
    pub fn ranking(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.0.len()).collect();
        idx.sort_by(|&a, &b| self.0[b].total_cmp(&self.0[a]));
        idx
    }
}

/// Power iteration on a positive row-major matrix. `v` is the start vector on
/// entry and the Perron vector (sum 1) on exit. Stops when the Collatz–Wielandt
/// bounds `min (Av)_i/v_i <= λ <= max (Av)_i/v_i` agree to `PERRON_TOL`
/// relative.
fn perron_in_place(a: &[f64], n: usize, v: &mut [f64]) -> Result<f64> {
    let mut w = vec![0.0; n];
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    for _ in 0..PERRON_MAX_ITER {
        for (i, wi) in w.iter_mut().enumerate() {
            *wi = a[i * n..(i + 1) * n].iter().zip(v.iter()).map(|(x, y)| x * y).sum();
        }
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for (wi, vi) in w.iter().zip(v.iter()) {
            let r = wi / vi;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        let total: f64 = w.iter().sum();
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / total;
        }
        if hi - lo <= PERRON_TOL * hi {
            return Ok(0.5 * (lo + hi));
        }
    }
    Err(Error::Numeric("power iteration did not converge"))
}

fn row_geometric_means(m: &CompletePcm) -> Vec<f64> {
    let n = m.order() as f64;
    m.rows().map(|r| math::exp(r.iter().map(|&x| math::ln(x)).sum::<f64>() / n)).collect()
}

/// Perron eigenvalue and eigenvector (sum 1).
pub fn perron(m: &CompletePcm) -> Result<(f64, Vec<f64>)> {
    let mut v = row_geometric_means(m);
    let lambda = perron_in_place(m.as_slice(), m.order(), &mut v)?;
    Ok((lambda, v))
}

/// Largest eigenvalue of a positive reciprocal matrix (`>= n`).
pub fn lambda_max(m: &CompletePcm) -> Result<f64> {
    perron(m).map(|(l, _)| l)
}

pub fn em_weights(m: &CompletePcm) -> Result<WeightVector> {
    WeightVector::from_raw(&perron(m)?.1)
}

pub fn gm_weights(m: &CompletePcm) -> Result<WeightVector> {
    WeightVector::from_raw(&row_geometric_means(m))
}

fn require_connected(matrix: &IncompletePcm) -> Result<()> {
    if graph_of(matrix).is_connected() {
        Ok(())
    } else {
        Err(Error::NonUnique)
    }
}

/// Workspace for `λ_max` and its gradient with respect to the logs of the
/// missing entries (with reciprocals following).
struct Spectral<'a> {
    n: usize,
    cells: &'a [(usize, usize)],
    a: Vec<f64>,
    at: Vec<f64>,
    v: Vec<f64>,
    u: Vec<f64>,
}

impl Spectral<'_> {
    fn set(&mut self, logs: &[f64]) {
        let n = self.n;
        for (&(i, j), &t) in self.cells.iter().zip(logs) {
            self.a[i * n + j] = math::exp(t);
            self.a[j * n + i] = math::exp(-t);
        }
    }

    /// `λ_max` at `logs`; the partial derivative for `(i, j)` is
    /// `(u_i v_j a_ij - u_j v_i a_ji) / u·v` with `u`, `v` the left and right
    /// Perron vectors.
    fn eval(&mut self, logs: &[f64], grad: &mut [f64]) -> Result<f64> {
        let n = self.n;
        self.set(logs);
        for r in 0..n {
            for c in 0..n {
                self.at[c * n + r] = self.a[r * n + c];
            }
        }
        let lambda = perron_in_place(&self.a, n, &mut self.v)?;
        perron_in_place(&self.at, n, &mut self.u)?;
        let (u, v, a) = (&self.u, &self.v, &self.a);
        let uv: f64 = u.iter().zip(v.iter()).map(|(x, y)| x * y).sum();
        for (g, &(i, j)) in grad.iter_mut().zip(self.cells) {
            *g = (u[i] * v[j] * a[i * n + j] - u[j] * v[i] * a[j * n + i]) / uv;
        }
        Ok(lambda)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Fill minimising the Perron eigenvalue over the logs of the missing
/// entries, each kept in `[ln(1/9999), ln 9999]`.
///
/// `λ_max` is convex and smooth in the log-entries. The minimiser is found by
/// BFGS from the logarithmic least squares fill, with line searches that
/// only look at the sign and size of the directional derivative, so progress
/// does not depend on resolving `λ_max` differences near machine precision.
pub fn cr_optimal_complete(matrix: &IncompletePcm) -> Result<CompletionResult> {
    let (x, _, _) = minimize_lambda(matrix, CR_GRAD_TOL)?;
    let completed = matrix.fill_log(&x)?;
    CompletionResult::new(matrix, completed, Method::EigenvalueOptimal, Vec::new(), false)
}

/// Certified lower bound on `λ_max` of the eigenvalue-optimal fill from a
/// rough minimisation (gradient below `grad_tol`): by convexity the optimum
/// is at least `λ(x) - Σ_i |g_i| · max |x_i - y_i|` over the search box.
pub fn lambda_min_lower_bound(matrix: &IncompletePcm, grad_tol: f64) -> Result<f64> {
    let (x, lambda, g) = minimize_lambda(matrix, grad_tol)?;
    let bound = math::ln(CR_SEARCH_MAX);
    let slack: f64 = x.iter().zip(&g).map(|(xi, gi)| math::abs(*gi) * (bound + math::abs(*xi))).sum();
    Ok(lambda - slack)
}

/// Returns the minimiser, `λ_max` there and the gradient.
fn minimize_lambda(matrix: &IncompletePcm, grad_tol: f64) -> Result<(Vec<f64>, f64, Vec<f64>)> {
    require_connected(matrix)?;
    let n = matrix.order();
    let cells = matrix.missing_cells();
    let k = cells.len();
    let start = lls_logs(matrix)?;
    let bound = math::ln(CR_SEARCH_MAX);
    let mut x: Vec<f64> = cells.iter().map(|&(i, j)| (start[i] - start[j]).clamp(-bound, bound)).collect();
    let mut sp = Spectral {
        n,
        cells,
        a: matrix.fill_log(&x)?.as_slice().to_vec(),
        at: vec![0.0; n * n],
        v: vec![1.0; n],
        u: vec![1.0; n],
    };

    let mut g = vec![0.0; k];
    let mut g_new = vec![0.0; k];
    let mut trial = vec![0.0; k];
    let mut h = identity(k);
    let mut lambda = sp.eval(&x, &mut g)?;
    for _ in 0..CR_MAX_ITER {
        if g.iter().all(|gi| math::abs(*gi) <= grad_tol) {
            return Ok((x, lambda, g));
        }
        let mut d: Vec<f64> = (0..k).map(|r| -dot(&h[r * k..(r + 1) * k], &g)).collect();
        if dot(&d, &g) >= 0.0 {
            h = identity(k);
            d = g.iter().map(|gi| -gi).collect();
        }
        // Largest step that keeps every entry inside the search range.
        let s_max = x
            .iter()
            .zip(&d)
            .map(|(&xi, &di)| {
                if di > 0.0 {
                    (bound - xi) / di
                } else if di < 0.0 {
                    (-bound - xi) / di
                } else {
                    f64::INFINITY
                }
            })
            .fold(f64::INFINITY, f64::min);
        let slope0 = dot(&g, &d);
        let mut slope_at = |s: f64, trial: &mut Vec<f64>, gt: &mut Vec<f64>| -> Result<(f64, f64)> {
            for ((t, xi), di) in trial.iter_mut().zip(&x).zip(&d) {
                *t = xi + s * di;
            }
            let l = sp.eval(trial, gt)?;
            Ok((dot(gt, &d), l))
        };
        // Bracket the zero of the directional derivative.
        let (mut lo, mut s_lo) = (0.0, slope0);
        let mut hi = 1.0f64.min(s_max);
        let (mut s_hi, mut l_new) = slope_at(hi, &mut trial, &mut g_new)?;
        let mut step = hi;
        let mut done = s_hi < 0.0 && hi >= s_max;
        while !done && s_hi < 0.0 {
            lo = hi;
            s_lo = s_hi;
            hi = (2.0 * hi).min(s_max);
            (s_hi, l_new) = slope_at(hi, &mut trial, &mut g_new)?;
            step = hi;
            done = s_hi < 0.0 && hi >= s_max;
        }
        // Illinois steps until the slope has shrunk enough.
        let mut side = 0i8;
        let mut iterations = 0;
        while !done && math::abs(s_hi) > LINE_SEARCH_SHRINK * math::abs(slope0) && iterations < CR_LINE_ITER {
            iterations += 1;
            let c = hi - s_hi * (hi - lo) / (s_hi - s_lo);
            if !(c > lo && c < hi) {
                break;
            }
            let (s_c, l_c) = slope_at(c, &mut trial, &mut g_new)?;
            step = c;
            l_new = l_c;
            if math::abs(s_c) <= LINE_SEARCH_SHRINK * math::abs(slope0) {
                break;
            }
            if s_c < 0.0 {
                lo = c;
                s_lo = s_c;
                if side == -1 {
                    s_hi *= 0.5;
                }
                side = -1;
            } else {
                hi = c;
                s_hi = s_c;
                if side == 1 {
                    s_lo *= 0.5;
                }
                side = 1;
            }
        }
        // `trial`, `g_new` and `l_new` belong to the last evaluated step
        let s: Vec<f64> = d.iter().map(|di| step * di).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        x.copy_from_slice(&trial);
        core::mem::swap(&mut g, &mut g_new);
        lambda = l_new;
        if s.iter().all(|si| math::abs(*si) <= CR_STEP_TOL) {
            return Ok((x, lambda, g));
        }
        let sy = dot(&s, &y);
        if sy > 0.0 {
            bfgs_update(&mut h, &s, &y, sy);
        } else {
            h = identity(k);
        }
    }
    Err(Error::Numeric("eigenvalue minimisation did not converge"))
}

fn identity(k: usize) -> Vec<f64> {
    let mut h = vec![0.0; k * k];
    for r in 0..k {
        h[r * k + r] = 1.0;
    }
    h
}

/// Inverse-Hessian update `H <- (I - ρ s yᵀ) H (I - ρ y sᵀ) + ρ s sᵀ`.
fn bfgs_update(h: &mut [f64], s: &[f64], y: &[f64], sy: f64) {
    let k = s.len();
    let rho = 1.0 / sy;
    let hy: Vec<f64> = (0..k).map(|r| dot(&h[r * k..(r + 1) * k], y)).collect();
    let yhy = dot(y, &hy);
    for r in 0..k {
        for c in 0..k {
            h[r * k + c] += -rho * (hy[r] * s[c] + s[r] * hy[c]) + (rho * rho * yhy + rho) * s[r] * s[c];
        }
    }
}

/// Log-weights of the least squares fit `log a_ij ≈ v_i - v_j` over known
/// comparisons, normalised by `v_{n-1} = 0`.
pub fn lls_logs(matrix: &IncompletePcm) -> Result<Vec<f64>> {
    require_connected(matrix)?;
    let n = matrix.order();
    let dim = n - 1;
    let mut lap = vec![0.0; dim * dim];
    let mut rhs = vec![0.0; dim];
    for (i, j) in graph_of(matrix).edges().iter().copied() {
        let l = math::ln(matrix.get(i, j).expect("edge is known"));
        for (u, w, sign) in [(i, j, 1.0), (j, i, -1.0)] {
            if u == dim {
                continue;
            }
            lap[u * dim + u] += 1.0;
            if w != dim {
                lap[u * dim + w] -= 1.0;
            }
            rhs[u] += sign * l;
        }
    }
    let mut v = if dim == 0 { Vec::new() } else { math::solve_linear(&mut lap, &mut rhs, dim).map_err(|_| Error::NonUnique)? };
    v.push(0.0);
    Ok(v)
}

/// Fill `x_ij = exp(v_i - v_j)` from the least squares log-weights.
pub fn lls_optimal_complete(matrix: &IncompletePcm) -> Result<CompletionResult> {
    let v = lls_logs(matrix)?;
    let logs: Vec<f64> = matrix.missing_cells().iter().map(|&(i, j)| v[i] - v[j]).collect();
    let completed = matrix.fill_log(&logs)?;
    CompletionResult::new(matrix, completed, Method::LogLeastSquares, Vec::new(), false)
}
