use std::fmt::Write as _;

use super::EnhancedState;

/// Sparse column-major matrix of d: C^{i,j} → C^{i+1,j}. Rows index the
/// target basis, columns the source basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryMatrix {
    bidegree: (i64, i64),
    source: Vec<EnhancedState>,
    target: Vec<EnhancedState>,
    columns: Vec<Vec<(usize, i64)>>,
}

impl BoundaryMatrix {
    pub(crate) fn new(
        bidegree: (i64, i64),
        source: Vec<EnhancedState>,
        target: Vec<EnhancedState>,
        columns: Vec<Vec<(usize, i64)>>,
    ) -> Self {
        BoundaryMatrix { bidegree, source, target, columns }
    }

    /// Bidegree of the source.
    pub fn bidegree(&self) -> (i64, i64) {
        self.bidegree
    }

    pub fn source(&self) -> &[EnhancedState] {
        &self.source
    }

    pub fn target(&self) -> &[EnhancedState] {
        &self.target
    }

    pub fn rows(&self) -> usize {
        self.target.len()
    }

    pub fn cols(&self) -> usize {
        self.source.len()
    }

    pub fn columns(&self) -> &[Vec<(usize, i64)>] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn entry(&self, row: usize, col: usize) -> i64 {
        self.columns[col].iter().filter(|(r, _)| *r == row).map(|(_, v)| v).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.cols()]; self.rows()];
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                m[r][c] += v;
            }
        }
        m
    }

    /// Matrix–vector product in the canonical bases.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.cols());
        let mut out = vec![0i64; self.rows()];
        for (c, col) in self.columns.iter().enumerate() {
            if v[c] != 0 {
                for &(r, e) in col {
                    out[r] += e * v[c];
                }
            }
        }
        out
    }

    /// Whether `self · prev` is the zero matrix.
    pub fn compose_is_zero(&self, prev: &BoundaryMatrix) -> bool {
        if prev.rows() == 0 || self.cols() == 0 || prev.cols() == 0 || self.rows() == 0 {
            return true;
        }
        assert_eq!(prev.rows(), self.cols(), "matrices do not compose");
        prev.columns.iter().all(|col| {
            let mut acc = std::collections::HashMap::new();
            for &(k, a) in col {
                for &(r, b) in &self.columns[k] {
                    *acc.entry(r).or_insert(0i64) += a * b;
                }
            }
            acc.values().all(|&v| v == 0)
        })
    }

    /// `row col value` lines, 0-based, one per nonzero entry.
    pub fn to_triplets(&self) -> String {
        let mut out = String::new();
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                let _ = writeln!(out, "{r} {c} {v}");
            }
        }
        out
    }
}
