//! Symmetric coupling matrices: construction, ensembles, file formats, and
//! the spectral quantities behind the mean-field diagnostics.
//!
//! Everything is dense. Vertex counts stay at desk scale (a couple of
//! thousand for diagnostics, a couple of dozen for enumeration), where dense
//! storage is simpler and exact.

mod ensembles;
mod io;
mod spectral;

pub use ensembles::{generate, EnsembleSpec};
pub use io::{read_matrix, read_matrix_str, write_matrix, write_matrix_string};
pub use spectral::{spectral_diagnostics, symmetric_eigenvalues, SpectralDiagnostics};

use serde::Serialize;

use crate::error::{Error, Result};

/// Where a matrix's normalization came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingTag {
    /// Unscaled 0/1 adjacency.
    Raw,
    /// Adjacency times n / (2|E|).
    PerEdge,
    /// Adjacency times 1/d (regular graphs) or 1/(np) (Erdos-Renyi).
    PerDegree,
    /// Bi-regular bipartite adjacency times 1/(c+d).
    Bipartite,
    /// Gaussian couplings Z(i,j)/sqrt(n).
    Sk,
    /// Pattern correlations (1/n) sum_k eta_ik eta_jk.
    Hopfield,
    /// Anything user-supplied.
    Custom,
}

/// Symmetric n x n interaction matrix with its scaling provenance.
///
/// Symmetry is maintained by construction: every write goes through
/// [`CouplingMatrix::set_sym`], so `get(i, j) == get(j, i)` holds exactly.
#[derive(Debug, Clone)]
pub struct CouplingMatrix {
    n: usize,
    entries: Vec<f64>,
    scaling: ScalingTag,
}

impl CouplingMatrix {
    pub fn zeros(n: usize, scaling: ScalingTag) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "matrix size must be positive".into(),
            ));
        }
        Ok(CouplingMatrix {
            n,
            entries: vec![0.0; n * n],
            scaling,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scaling(&self) -> ScalingTag {
        self.scaling
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    /// Set both (i,j) and (j,i).
    pub fn set_sym(&mut self, i: usize, j: usize, value: f64) {
        self.entries[i * self.n + j] = value;
        self.entries[j * self.n + i] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    /// tr(A^2)/n computed directly from the entries.
    pub fn trace_sq_over_n(&self) -> f64 {
        let sum_sq: f64 = self.entries.iter().map(|&a| a * a).sum();
        sum_sq / self.n as f64
    }

    /// Row sums R(i) = sum_j A(i, j).
    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|&a| a * a).sum::<f64>().sqrt()
    }

    pub fn has_zero_diagonal(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i) == 0.0)
    }

    /// Index of the first nonzero diagonal entry, if any.
    pub fn first_nonzero_diagonal(&self) -> Option<usize> {
        (0..self.n).find(|&i| self.get(i, i) != 0.0)
    }

    /// Copy with the diagonal zeroed; also returns the absolute diagonal mass
    /// sum_i |A(i,i)| that was dropped.
    pub fn without_diagonal(&self) -> (CouplingMatrix, f64) {
        let mut out = self.clone();
        let mut dropped = 0.0;
        for i in 0..self.n {
            dropped += out.get(i, i).abs();
            out.set_sym(i, i, 0.0);
        }
        (out, dropped)
    }
}

/// Row-sum concentration summary for a supplied deviation threshold.
#[derive(Debug, Clone, Serialize)]
pub struct RowSumSummary {
    pub mean: f64,
    /// Fraction of rows with |R(i) - 1| > delta.
    pub deviation_fraction: f64,
    pub delta: f64,
}

pub fn row_sum_summary(a: &CouplingMatrix, delta: f64) -> RowSumSummary {
    let sums = a.row_sums();
    let n = sums.len() as f64;
    let mean = sums.iter().sum::<f64>() / n;
    let deviating = sums.iter().filter(|&&r| (r - 1.0).abs() > delta).count();
    RowSumSummary {
        mean,
        deviation_fraction: deviating as f64 / n,
        delta,
    }
}

/// The L1-style boundedness check on sup_{x in [0,1]^n} sum_i |(A x)_i|.
#[derive(Debug, Clone, Serialize)]
pub struct L1Condition {
    /// sum_{i,j} |A(i,j)|; equals the supremum when all entries share a sign.
    pub bound: f64,
    /// Exact supremum by vertex enumeration (convexity puts the maximum at
    /// cube vertices); absent when n exceeds the enumeration cap.
    pub exact: Option<f64>,
}

pub fn l1_condition(a: &CouplingMatrix, exact_cap: usize) -> L1Condition {
    let n = a.n();
    let bound: f64 = (0..n)
        .map(|i| a.row(i).iter().map(|v| v.abs()).sum::<f64>())
        .sum();
    let exact = if n <= exact_cap && n < usize::BITS as usize {
        let mut best = 0.0f64;
        for mask in 0u64..(1u64 << n) {
            let mut total = 0.0;
            for i in 0..n {
                let row = a.row(i);
                let mut dot = 0.0;
                for j in 0..n {
                    if mask >> j & 1 == 1 {
                        dot += row[j];
                    }
                }
                total += dot.abs();
            }
            if total > best {
                best = total;
            }
        }
        Some(best)
    } else {
        None
    };
    L1Condition { bound, exact }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrix_l1() {
        let a = CouplingMatrix::zeros(4, ScalingTag::Custom).unwrap();
        let l1 = l1_condition(&a, 8);
        assert_eq!(l1.bound, 0.0);
        assert_eq!(l1.exact, Some(0.0));
    }

    #[test]
    fn per_edge_graph_l1_bound_is_n() {
        for n in [3usize, 5, 8] {
            let a = generate(&EnsembleSpec::Complete { n }).unwrap();
            let l1 = l1_condition(&a, 0);
            assert!(
                (l1.bound - n as f64).abs() < 1e-9,
                "n={n} bound={}",
                l1.bound
            );
        }
    }

    #[test]
    fn sk_exact_at_most_bound() {
        let a = generate(&EnsembleSpec::Sk { n: 8, seed: 3 }).unwrap();
        let l1 = l1_condition(&a, 10);
        let exact = l1.exact.unwrap();
        assert!(exact <= l1.bound + 1e-12);
        assert!(exact > 0.0);
    }

    #[test]
    fn without_diagonal_reports_dropped_mass() {
        let mut a = CouplingMatrix::zeros(3, ScalingTag::Custom).unwrap();
        a.set_sym(0, 0, 2.0);
        a.set_sym(1, 2, -1.0);
        let (b, dropped) = a.without_diagonal();
        assert_eq!(dropped, 2.0);
        assert!(b.has_zero_diagonal());
        assert_eq!(b.get(1, 2), -1.0);
    }

    #[test]
    fn row_sum_summary_flags_deviations() {
        let mut a = CouplingMatrix::zeros(2, ScalingTag::Custom).unwrap();
        a.set_sym(0, 1, 1.0);
        // both row sums are exactly 1
        let s = row_sum_summary(&a, 0.05);
        assert_eq!(s.deviation_fraction, 0.0);
        assert!((s.mean - 1.0).abs() < 1e-15);
    }
}
