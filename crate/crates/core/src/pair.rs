//! Coordinates indexed by ordered pairs of distinct alternatives.
//!
//! Pairs `(i, j)` with `i != j` are laid out row by row: `(0,1), (0,2), …,
//! (1,0), (1,2), …`, so the dimension is `n (n - 1)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[inline]
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1)
}

/// Position of the ordered pair `(i, j)`; panics on `i == j` in debug builds.
#[inline]
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i != j && i < n && j < n);
    i * (n - 1) + if j > i { j - 1 } else { j }
}

/// Inverse of [`pair_index`].
#[inline]
pub fn pair_at(n: usize, index: usize) -> (usize, usize) {
    let i = index / (n - 1);
    let r = index % (n - 1);
    (i, if r >= i { r + 1 } else { r })
}

pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> + Clone {
    (0..n).flat_map(move |i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairVector {
    n: usize,
    values: Vec<f64>,
}

impl PairVector {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            values: vec![0.0; pair_count(n)],
        }
    }

    pub fn from_values(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != pair_count(n) {
            return Err(Error::DimensionMismatch {
                expected: pair_count(n),
                found: values.len(),
            });
        }
        Ok(Self { n, values })
    }

    /// Builds a vector from a function of the pair.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        Self {
            n,
            values: pairs(n).map(|(i, j)| f(i, j)).collect(),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[pair_index(self.n, i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let k = pair_index(self.n, i, j);
        self.values[k] = value;
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        pairs(self.n)
            .zip(&self.values)
            .map(|((i, j), &v)| (i, j, v))
    }

    pub fn dot(&self, other: &PairVector) -> f64 {
        crate::math::dot(&self.values, &other.values)
    }

    pub fn distance(&self, other: &PairVector) -> f64 {
        let s: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        crate::math::sqrt(s)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}
