//! Pairwise comparison matrices, their comparison graph and triad inconsistency.
//!
//! Indices are zero-based throughout the API. A triad `(i, j, k)` always has
//! `i < j < k`; its natural inconsistency is
//! `max(a_ik / (a_ij a_jk), a_ij a_jk / a_ik)`, which does not depend on the
//! orientation in which the triad is traversed.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::math;

/// Relative tolerance used when checking `a_ij * a_ji == 1`.
pub const RECIPROCITY_TOL: f64 = 1e-12;

fn check_entry(v: f64, row: usize, col: usize) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositive { row, col })
    }
}

fn reciprocal_ok(a: f64, b: f64) -> bool {
    math::abs(a * b - 1.0) <= RECIPROCITY_TOL
}

/// A fully known positive reciprocal matrix, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletePcm {
    n: usize,
    entries: Vec<f64>,
}

impl CompletePcm {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::RaggedRow { row: i, got: row.len(), expected: n });
            }
            entries.extend_from_slice(row);
        }
        Self::from_row_major(n, entries)
    }

    pub fn from_row_major(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n < 1 || entries.len() != n * n {
            return Err(Error::BadOrder { got: n, min: 1 });
        }
        for i in 0..n {
            for j in 0..n {
                check_entry(entries[i * n + j], i, j)?;
            }
            if entries[i * n + i] != 1.0 {
                return Err(Error::Diagonal(i));
            }
        }
        for i in 0..n {
            for j in 0..i {
                if !reciprocal_ok(entries[i * n + j], entries[j * n + i]) {
                    return Err(Error::Reciprocity { row: i, col: j });
                }
            }
        }
        Ok(Self { n, entries })
    }

    /// Builds a matrix from its strict upper triangle; the lower triangle is
    /// filled with exact reciprocals.
    pub fn from_upper(n: usize, mut upper: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut entries = vec![1.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = upper(i, j);
                check_entry(v, i, j)?;
                entries[i * n + j] = v;
                entries[j * n + i] = 1.0 / v;
            }
        }
        if n < 1 {
            return Err(Error::BadOrder { got: n, min: 1 });
        }
        Ok(Self { n, entries })
    }

    /// The consistent matrix `a_ij = w_i / w_j`.
    pub fn from_weights(w: &[f64]) -> Result<Self> {
        for (i, &x) in w.iter().enumerate() {
            check_entry(x, i, i)?;
        }
        Self::from_upper(w.len(), |i, j| w[i] / w[j])
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks(self.n)
    }

    /// Relabels alternatives: entry `(i, j)` of the result is entry
    /// `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.n;
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = self.get(perm[i], perm[j]);
            }
        }
        Self { n, entries }
    }

    /// Inconsistency of a triad in this matrix.
    pub fn triad_ti(&self, t: Triad) -> f64 {
        ti_unchecked(self.get(t.i, t.j), self.get(t.j, t.k), self.get(t.i, t.k))
    }
}

/// A reciprocal matrix in which some off-diagonal comparisons are missing.
#[derive(Debug, Clone, PartialEq)]
pub struct IncompletePcm {
    n: usize,
    entries: Vec<Option<f64>>,
    missing: Vec<(usize, usize)>,
}

impl IncompletePcm {
    pub fn from_rows(rows: &[Vec<Option<f64>>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::RaggedRow { row: i, got: row.len(), expected: n });
            }
            entries.extend_from_slice(row);
        }
        Self::from_row_major(n, entries)
    }

    pub fn from_row_major(n: usize, entries: Vec<Option<f64>>) -> Result<Self> {
        if n < 1 || entries.len() != n * n {
            return Err(Error::BadOrder { got: n, min: 1 });
        }
        for i in 0..n {
            match entries[i * n + i] {
                Some(1.0) => {}
                _ => return Err(Error::Diagonal(i)),
            }
        }
        let mut missing = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                match (entries[i * n + j], entries[j * n + i]) {
                    (Some(a), Some(b)) => {
                        check_entry(a, i, j)?;
                        check_entry(b, j, i)?;
                        if !reciprocal_ok(a, b) {
                            return Err(Error::Reciprocity { row: j, col: i });
                        }
                    }
                    (None, None) => missing.push((i, j)),
                    (Some(_), None) => return Err(Error::MissingPattern { row: j, col: i }),
                    (None, Some(_)) => return Err(Error::MissingPattern { row: i, col: j }),
                }
            }
        }
        Ok(Self { n, entries, missing })
    }

    /// Builds from the strict upper triangle (`None` = missing).
    pub fn from_upper(n: usize, mut upper: impl FnMut(usize, usize) -> Option<f64>) -> Result<Self> {
        let mut entries = vec![Some(1.0); n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = upper(i, j);
                if let Some(x) = v {
                    check_entry(x, i, j)?;
                }
                entries[i * n + j] = v;
                entries[j * n + i] = v.map(|x| 1.0 / x);
            }
        }
        Self::from_row_major(n, entries)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.entries[i * self.n + j]
    }

    /// Number of missing cells above the diagonal.
    pub fn missing_count(&self) -> usize {
        self.missing.len()
    }

    /// Missing upper-triangle cells in row-major order.
    pub fn missing_cells(&self) -> &[(usize, usize)] {
        &self.missing
    }

    /// Position of a missing upper cell in [`missing_cells`](Self::missing_cells).
    pub fn missing_index(&self, i: usize, j: usize) -> Option<usize> {
        let key = if i < j { (i, j) } else { (j, i) };
        self.missing.binary_search(&key).ok()
    }

    pub fn is_complete(&self) -> bool {
        self.missing.is_empty()
    }

    /// Fills the missing upper cells with `values` (same order as
    /// [`missing_cells`](Self::missing_cells)); lower cells get reciprocals.
    pub fn fill(&self, values: &[f64]) -> Result<CompletePcm> {
        if values.len() != self.missing.len() {
            return Err(Error::LengthMismatch { left: values.len(), right: self.missing.len() });
        }
        let n = self.n;
        let mut entries: Vec<f64> = self.entries.iter().map(|e| e.unwrap_or(0.0)).collect();
        for (&(i, j), &v) in self.missing.iter().zip(values) {
            check_entry(v, i, j)?;
            entries[i * n + j] = v;
            entries[j * n + i] = 1.0 / v;
        }
        Ok(CompletePcm { n, entries })
    }

    /// Same as [`fill`](Self::fill) but with log-values of the missing cells.
    pub fn fill_log(&self, logs: &[f64]) -> Result<CompletePcm> {
        let values: Vec<f64> = logs.iter().map(|&x| math::exp(x)).collect();
        self.fill(&values)
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.n;
        let mut entries = vec![None; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = self.get(perm[i], perm[j]);
            }
        }
        Self::from_row_major(n, entries).expect("permutation preserves validity")
    }

    pub fn graph(&self) -> ComparisonGraph {
        graph_of(self)
    }
}

impl From<&CompletePcm> for IncompletePcm {
    fn from(m: &CompletePcm) -> Self {
        Self {
            n: m.n,
            entries: m.entries.iter().map(|&v| Some(v)).collect(),
            missing: Vec::new(),
        }
    }
}

/// Undirected graph with one edge per known off-diagonal comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl ComparisonGraph {
    /// Edges are normalised to `(min, max)` and deduplicated.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut edges: Vec<_> = edges
            .into_iter()
            .filter(|&(a, b)| a != b)
            .map(|(a, b)| if a < b { (a, b) } else { (b, a) })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        Self { n, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Connected component label of each vertex; labels are assigned in order
    /// of the smallest vertex in the component.
    pub fn components(&self) -> Vec<usize> {
        let adj = self.adjacency();
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }
}

pub fn graph_of(matrix: &IncompletePcm) -> ComparisonGraph {
    let n = matrix.n;
    let edges = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .filter(|&(i, j)| matrix.get(i, j).is_some());
    ComparisonGraph::new(n, edges)
}

/// Three alternatives with `i < j < k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triad {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl Triad {
    pub fn new(i: usize, j: usize, k: usize) -> Result<Self> {
        if i < j && j < k {
            Ok(Self { i, j, k })
        } else {
            Err(Error::Domain("triad indices must be strictly increasing"))
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.i == v || self.j == v || self.k == v
    }

    /// The three cells `(i,j)`, `(j,k)`, `(i,k)`, all above the diagonal.
    pub fn cells(&self) -> [(usize, usize); 3] {
        [(self.i, self.j), (self.j, self.k), (self.i, self.k)]
    }
}

impl core::fmt::Display for Triad {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "({},{},{})", self.i + 1, self.j + 1, self.k + 1)
    }
}

/// All triads of order `n` in lexicographic (canonical) order.
pub fn all_triads(n: usize) -> Vec<Triad> {
    let mut out = Vec::with_capacity(triad_count(n));
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                out.push(Triad { i, j, k });
            }
        }
    }
    out
}

pub fn triad_count(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

#[inline]
fn ti_unchecked(a_ij: f64, a_jk: f64, a_ik: f64) -> f64 {
    let r = a_ik / (a_ij * a_jk);
    if r >= 1.0 {
        r
    } else {
        1.0 / r
    }
}

fn check_triad_args(a_ij: f64, a_jk: f64, a_ik: f64) -> Result<()> {
    for v in [a_ij, a_jk, a_ik] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Domain("triad entries must be positive and finite"));
        }
    }
    Ok(())
}

/// Natural triad inconsistency, always `>= 1`.
pub fn triad_ti(a_ij: f64, a_jk: f64, a_ik: f64) -> Result<f64> {
    check_triad_args(a_ij, a_jk, a_ik)?;
    Ok(ti_unchecked(a_ij, a_jk, a_ik))
}

/// Koczkodaj triad inconsistency, in `[0, 1)`.
pub fn triad_ki(a_ij: f64, a_jk: f64, a_ik: f64) -> Result<f64> {
    check_triad_args(a_ij, a_jk, a_ik)?;
    let r = a_ik / (a_ij * a_jk);
    Ok(math::abs(1.0 - r).min(math::abs(1.0 - 1.0 / r)))
}

fn require_triads(m: &CompletePcm) -> Result<()> {
    if m.n < 3 {
        Err(Error::BadOrder { got: m.n, min: 3 })
    } else {
        Ok(())
    }
}

/// Largest triad inconsistency (TI scale).
pub fn matrix_ti(m: &CompletePcm) -> Result<f64> {
    require_triads(m)?;
    Ok(all_triads(m.n).into_iter().map(|t| m.triad_ti(t)).fold(1.0, f64::max))
}

/// Koczkodaj index of the matrix: the worst triad's KI.
pub fn matrix_ki(m: &CompletePcm) -> Result<f64> {
    require_triads(m)?;
    let mut worst = 0.0f64;
    for t in all_triads(m.n) {
        worst = worst.max(triad_ki(m.get(t.i, t.j), m.get(t.j, t.k), m.get(t.i, t.k))?);
    }
    Ok(worst)
}

/// All triad inconsistencies sorted non-increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaVector(Vec<f64>);

impl ThetaVector {
    /// Sorts `values` non-increasing. Values below 1 or non-finite are rejected.
    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite() || *v < 1.0) {
            return Err(Error::Domain("theta values must be finite and >= 1"));
        }
        values.sort_unstable_by(|a, b| b.total_cmp(a));
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest triad inconsistency, 1 for an empty vector.
    pub fn head(&self) -> f64 {
        self.0.first().copied().unwrap_or(1.0)
    }
}

pub fn theta_vector(m: &CompletePcm) -> Result<ThetaVector> {
    require_triads(m)?;
    ThetaVector::from_values(all_triads(m.n).into_iter().map(|t| m.triad_ti(t)).collect())
}

/// Exact lexicographic comparison; `Less` means `a` is the better completion.
pub fn lex_compare(a: &ThetaVector, b: &ThetaVector) -> Result<Ordering> {
    lex_compare_tol(a, b, 0.0)
}

/// Lexicographic comparison treating values within relative `tol` as equal.
pub fn lex_compare_tol(a: &ThetaVector, b: &ThetaVector, tol: f64) -> Result<Ordering> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    for (&x, &y) in a.0.iter().zip(&b.0) {
        if math::approx_eq(x, y, tol) {
            continue;
        }
        return Ok(if x < y { Ordering::Less } else { Ordering::Greater });
    }
    Ok(Ordering::Equal)
}
