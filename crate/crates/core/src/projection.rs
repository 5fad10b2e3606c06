//! The linear map from arc space onto pair space.
//!
//! Coordinate `(i, j)` of the image sums the flow on every arc along which
//! `j` enters while `i` is already entirely below the level: `i ∈ X` for the
//! subset networks, `i ∈ Y` for the interval and semiorder networks.

use alloc::vec;
use alloc::vec::Vec;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::flow::{FlowVector, PathRef};
use crate::network::Network;
use crate::pair::{pair_count, pair_index, PairVector};

/// Sparse 0/1 matrix stored as one sorted arc list per ordered pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionMap {
    n: usize,
    arc_count: usize,
    rows: Vec<Vec<usize>>,
}

pub fn build_projection(net: &Network) -> ProjectionMap {
    let n = net.n();
    let mut rows = vec![Vec::new(); pair_count(n)];
    for a in 0..net.arc_count() {
        let (tail, head) = (net.node(net.tail(a)), net.node(net.head(a)));
        let entering = head.entered() & !tail.entered();
        for i in Bits(tail.below()) {
            for j in Bits(entering) {
                rows[pair_index(n, i, j)].push(a);
            }
        }
    }
    ProjectionMap {
        n,
        arc_count: net.arc_count(),
        rows,
    }
}

impl ProjectionMap {
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    /// Arc lists in pair order.
    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn row(&self, i: usize, j: usize) -> &[usize] {
        &self.rows[pair_index(self.n, i, j)]
    }

    /// Total number of nonzero coefficients.
    pub fn nonzeros(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn apply(&self, flow: &FlowVector) -> Result<PairVector> {
        self.apply_slice(flow.values())
    }

    pub fn apply_slice(&self, flow: &[f64]) -> Result<PairVector> {
        if flow.len() != self.arc_count {
            return Err(Error::DimensionMismatch {
                expected: self.arc_count,
                found: flow.len(),
            });
        }
        let values = self
            .rows
            .iter()
            .map(|row| row.iter().map(|&a| flow[a]).sum())
            .collect();
        PairVector::from_values(self.n, values)
    }

    /// Image of a path indicator vector.
    pub fn apply_path(&self, path: &PathRef) -> PairVector {
        let mut on_path = vec![false; self.arc_count];
        for &a in path.arcs() {
            on_path[a] = true;
        }
        let values = self
            .rows
            .iter()
            .map(|row| row.iter().filter(|&&a| on_path[a]).count() as f64)
            .collect();
        PairVector::from_values(self.n, values).expect("one value per row")
    }

    /// Transpose applied to `g`: arc `a` receives the sum of `g` over the rows containing `a`.
    pub fn apply_adjoint(&self, g: &PairVector) -> Result<Vec<f64>> {
        if g.dim() != self.rows.len() {
            return Err(Error::DimensionMismatch {
                expected: self.rows.len(),
                found: g.dim(),
            });
        }
        let mut out = vec![0.0; self.arc_count];
        self.adjoint_into(g.values(), &mut out);
        Ok(out)
    }

    pub(crate) fn adjoint_into(&self, g: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|c| *c = 0.0);
        for (row, &gv) in self.rows.iter().zip(g) {
            if gv != 0.0 {
                for &a in row {
                    out[a] += gv;
                }
            }
        }
    }
}
