//! Brute-force oracles for the acceptance run, independent of the library code.

#![allow(dead_code)]

use std::collections::BTreeSet;

use orderflow_core::{OrderKind, Relation};

/// Dense boolean matrix; `m[i][j]` means `i` is strictly below `j`.
pub type Matrix = Vec<Vec<bool>>;

pub fn matrix_of(r: &Relation) -> Matrix {
    let n = r.n();
    (0..n)
        .map(|i| (0..n).map(|j| r.contains(i, j)).collect())
        .collect()
}

fn irreflexive(m: &Matrix) -> bool {
    (0..m.len()).all(|i| !m[i][i])
}

fn transitive(m: &Matrix) -> bool {
    let n = m.len();
    (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(m[i][j] && m[j][k]) || m[i][k])))
}

fn complete(m: &Matrix) -> bool {
    let n = m.len();
    (0..n).all(|i| (0..n).all(|j| i == j || m[i][j] || m[j][i]))
}

fn asymmetric(m: &Matrix) -> bool {
    let n = m.len();
    (0..n).all(|i| (0..n).all(|j| !(m[i][j] && m[j][i])))
}

fn negatively_transitive(m: &Matrix) -> bool {
    let n = m.len();
    (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| m[i][j] || m[j][k] || !m[i][k])))
}

fn two_plus_two_free(m: &Matrix) -> bool {
    let n = m.len();
    (0..n).all(|i| {
        (0..n).all(|j| !m[i][j] || (0..n).all(|k| (0..n).all(|l| !m[k][l] || m[i][l] || m[k][j])))
    })
}

fn three_plus_one_free(m: &Matrix) -> bool {
    let n = m.len();
    (0..n).all(|i| {
        (0..n).all(|j| (0..n).all(|k| !(m[i][j] && m[j][k]) || (0..n).all(|l| m[i][l] || m[l][k])))
    })
}

pub fn oracle_is_order(m: &Matrix, kind: OrderKind) -> bool {
    match kind {
        OrderKind::LinearOrder => irreflexive(m) && transitive(m) && complete(m),
        OrderKind::WeakOrder => asymmetric(m) && negatively_transitive(m),
        OrderKind::IntervalOrder => irreflexive(m) && two_plus_two_free(m),
        OrderKind::Semiorder => irreflexive(m) && two_plus_two_free(m) && three_plus_one_free(m),
    }
}

/// Every irreflexive relation on `n` alternatives, as a matrix.
pub fn all_irreflexive(n: usize) -> impl Iterator<Item = Matrix> {
    let slots: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    (0u64..1 << slots.len()).map(move |bits| {
        let mut m = vec![vec![false; n]; n];
        for (k, &(i, j)) in slots.iter().enumerate() {
            m[i][j] = bits >> k & 1 == 1;
        }
        m
    })
}

pub fn relation_of(m: &Matrix) -> Relation {
    let n = m.len();
    Relation::from_pairs(
        n,
        (0..n).flat_map(|i| (0..n).filter(move |&j| m[i][j]).map(move |j| (i, j))),
    )
    .unwrap()
}

pub fn oracle_orders(n: usize, kind: OrderKind) -> BTreeSet<Relation> {
    all_irreflexive(n)
        .filter(|m| oracle_is_order(m, kind))
        .map(|m| relation_of(&m))
        .collect()
}

/// Characteristic vector in the crate's pair layout, computed from the matrix.
pub fn oracle_vector(m: &Matrix) -> Vec<u8> {
    let n = m.len();
    (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| m[i][j] as u8)
        .collect()
}

pub fn factorial(n: u128) -> u128 {
    (1..=n).product()
}

/// Ordered set partitions.
pub fn fubini(n: usize) -> u128 {
    let mut a = vec![1u128];
    for m in 1..=n {
        let mut binom = 1u128;
        let mut total = 0u128;
        for k in 1..=m {
            binom = binom * (m - k + 1) as u128 / k as u128;
            total += binom * a[m - k];
        }
        a.push(total);
    }
    a[n]
}

/// L1 distance from `point` to the convex hull of `vertices`, by linear programming.
pub fn hull_l1_distance(vertices: &[Vec<f64>], point: &[f64]) -> f64 {
    use minilp::{ComparisonOp, OptimizationDirection, Problem};
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let weights: Vec<_> = vertices
        .iter()
        .map(|_| lp.add_var(0.0, (0.0, f64::INFINITY)))
        .collect();
    lp.add_constraint(
        weights.iter().map(|&w| (w, 1.0)).collect::<Vec<_>>(),
        ComparisonOp::Eq,
        1.0,
    );
    for (k, &target) in point.iter().enumerate() {
        let over = lp.add_var(1.0, (0.0, f64::INFINITY));
        let under = lp.add_var(1.0, (0.0, f64::INFINITY));
        let mut row: Vec<_> = weights
            .iter()
            .zip(vertices)
            .filter(|(_, v)| v[k] != 0.0)
            .map(|(&w, v)| (w, v[k]))
            .collect();
        row.push((over, -1.0));
        row.push((under, 1.0));
        lp.add_constraint(row, ComparisonOp::Eq, target);
    }
    lp.solve().expect("hull LP is always feasible").objective()
}
