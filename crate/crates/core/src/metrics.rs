//! Comparison metrics: incompatibility index, Saaty's consistency index and
//! the consistency ratio of an incomplete matrix.

use alloc::collections::BTreeMap;

use crate::baseline::{cr_optimal_complete, lambda_max};
use crate::error::{Error, Result};
use crate::pcm::{CompletePcm, IncompletePcm};

/// `100 * (mean_ij a_ij b_ji - 1)`; zero iff the matrices coincide.
pub fn ici(a: &CompletePcm, b: &CompletePcm) -> Result<f64> {
    let n = a.order();
    if b.order() != n {
        return Err(Error::LengthMismatch { left: n, right: b.order() });
    }
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            total += a.get(i, j) * b.get(j, i);
        }
    }
    Ok((100.0 * (total / (n * n) as f64 - 1.0)).max(0.0))
}

/// `(λ_max - n) / (n - 1)`, clamped at 0 against round-off.
pub fn consistency_index(m: &CompletePcm) -> Result<f64> {
    let n = m.order();
    if n < 2 {
        return Ok(0.0);
    }
    let lambda = lambda_max(m)?;
    Ok(((lambda - n as f64) / (n as f64 - 1.0)).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RiProvenance {
    UserSupplied,
    Estimated,
}

/// Random index per `(n, m)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RiTable {
    entries: BTreeMap<(usize, usize), (f64, RiProvenance)>,
}

impl RiTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, n: usize, m: usize, value: f64, provenance: RiProvenance) -> Result<()> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::Domain("random index must be finite and non-negative"));
        }
        self.entries.insert((n, m), (value, provenance));
        Ok(())
    }

    pub fn get(&self, n: usize, m: usize) -> Option<f64> {
        self.entries.get(&(n, m)).map(|e| e.0)
    }

    pub fn provenance(&self, n: usize, m: usize) -> Option<RiProvenance> {
        self.entries.get(&(n, m)).map(|e| e.1)
    }

    /// Entries from `other` replace those of `self`.
    pub fn merge(&mut self, other: &RiTable) {
        self.entries.extend(other.entries.iter().map(|(k, v)| (*k, *v)));
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64, RiProvenance)> + '_ {
        self.entries.iter().map(|(&(n, m), &(v, p))| (n, m, v, p))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// CI below this is read as a consistent completion when the random index is 0.
const CI_ZERO: f64 = 1e-9;

/// Ratio of a CI value to a random index; a zero index (forest graphs)
/// yields 0 for consistent fills and infinity otherwise.
pub fn ratio_to_ri(ci: f64, ri: f64) -> f64 {
    if ri > 0.0 {
        ci / ri
    } else if ci <= CI_ZERO {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Consistency ratio of an incomplete matrix: CI of its eigenvalue-optimal
/// fill divided by the random index for its `(n, m)`.
pub fn cr_incomplete(matrix: &IncompletePcm, ri: &RiTable) -> Result<f64> {
    let (n, m) = (matrix.order(), matrix.missing_count());
    let index = ri.get(n, m).ok_or(Error::MissingRandomIndex { n, m })?;
    let fill = cr_optimal_complete(matrix)?;
    Ok(ratio_to_ri(consistency_index(&fill.matrix)?, index))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ici_values() {
        let a = CompletePcm::from_upper(2, |_, _| 2.0).unwrap();
        let b = CompletePcm::from_upper(2, |_, _| 4.0).unwrap();
        assert_eq!(ici(&a, &a).unwrap(), 0.0);
        assert!((ici(&a, &b).unwrap() - 12.5).abs() < 1e-12);
        let c = CompletePcm::from_weights(&[1.0, 2.0, 3.0]).unwrap();
        assert!(ici(&a, &c).is_err());
    }

    #[test]
    fn ci_of_consistent_matrix() {
        let m = CompletePcm::from_weights(&[1.0, 5.0, 2.0]).unwrap();
        assert!(consistency_index(&m).unwrap() < 1e-12);
    }

    #[test]
    fn missing_ri_entry() {
        let a = IncompletePcm::from_upper(3, |i, j| if (i, j) == (0, 2) { None } else { Some(2.0) }).unwrap();
        assert_eq!(cr_incomplete(&a, &RiTable::new()), Err(Error::MissingRandomIndex { n: 3, m: 1 }));
        let mut t = RiTable::new();
        t.insert(3, 1, 0.0, RiProvenance::Estimated).unwrap();
        assert_eq!(cr_incomplete(&a, &t).unwrap(), 0.0);
    }

    #[test]
    fn ri_table_rejects_negative() {
        assert!(RiTable::new().insert(3, 0, -1.0, RiProvenance::UserSupplied).is_err());
    }
}
