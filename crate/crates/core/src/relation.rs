//! Binary preference relations and the four order kinds.
//!
//! `i R j` reads "i is strictly less preferred than j". Alternatives are the
//! integers `0..n`; a relation is stored as one successor bitmask per
//! alternative.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::bits::{full_mask, Bits};
use crate::error::{Error, Result};
use crate::pair::PairVector;

/// Largest supported number of alternatives (one `u32` bitmask per row).
pub const MAX_ALTERNATIVES: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrderKind {
    LinearOrder,
    WeakOrder,
    IntervalOrder,
    Semiorder,
}

impl OrderKind {
    pub const ALL: [OrderKind; 4] = [
        OrderKind::LinearOrder,
        OrderKind::WeakOrder,
        OrderKind::IntervalOrder,
        OrderKind::Semiorder,
    ];

    /// Two-letter code used on the command line and in files.
    pub fn code(self) -> &'static str {
        match self {
            OrderKind::LinearOrder => "lo",
            OrderKind::WeakOrder => "wo",
            OrderKind::IntervalOrder => "io",
            OrderKind::Semiorder => "so",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OrderKind::LinearOrder => "linear order",
            OrderKind::WeakOrder => "weak order",
            OrderKind::IntervalOrder => "interval order",
            OrderKind::Semiorder => "semiorder",
        }
    }
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OrderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase().replace(['_', '-', ' '], "");
        match lower.as_str() {
            "lo" | "linear" | "linearorder" => Ok(OrderKind::LinearOrder),
            "wo" | "weak" | "weakorder" => Ok(OrderKind::WeakOrder),
            "io" | "interval" | "intervalorder" => Ok(OrderKind::IntervalOrder),
            "so" | "semi" | "semiorder" => Ok(OrderKind::Semiorder),
            _ => Err(Error::InvalidRelation(format!("unknown order kind `{s}`"))),
        }
    }
}

/// An irreflexive relation on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Relation {
    n: usize,
    rows: Vec<u32>,
}

impl Relation {
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_ALTERNATIVES {
            return Err(Error::InvalidRelation(format!(
                "{n} alternatives exceeds the maximum of {MAX_ALTERNATIVES}"
            )));
        }
        Ok(Self {
            n,
            rows: vec![0; n],
        })
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut r = Self::empty(n)?;
        for (i, j) in pairs {
            if i >= n || j >= n {
                return Err(Error::InvalidRelation(format!(
                    "pair ({i},{j}) out of range for n = {n}"
                )));
            }
            if i == j {
                return Err(Error::InvalidRelation(format!(
                    "pair ({i},{i}) violates irreflexivity"
                )));
            }
            r.rows[i] |= 1 << j;
        }
        Ok(r)
    }

    /// Builds a relation from successor masks: bit `j` of `rows[i]` means `i R j`.
    pub fn from_rows(n: usize, rows: Vec<u32>) -> Result<Self> {
        if n > MAX_ALTERNATIVES || rows.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rows.len(),
            });
        }
        let full = full_mask(n);
        for (i, &row) in rows.iter().enumerate() {
            if row & !full != 0 || row & (1 << i) != 0 {
                return Err(Error::InvalidRelation(format!("row {i} is malformed")));
            }
        }
        Ok(Self { n, rows })
    }

    #[inline]
    pub(crate) fn from_rows_unchecked(n: usize, rows: Vec<u32>) -> Self {
        Self { n, rows }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    /// `{j : i R j}` as a bitmask.
    #[inline]
    pub fn successors(&self, i: usize) -> u32 {
        self.rows[i]
    }

    /// `{k : k R j}` as a bitmask.
    pub fn predecessors(&self, j: usize) -> u32 {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, &row)| row >> j & 1 == 1)
            .fold(0, |acc, (k, _)| acc | 1 << k)
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, &row)| Bits(row).map(move |j| (i, j)))
    }

    pub fn is_order(&self, kind: OrderKind) -> bool {
        is_order(self, kind)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (i, j)) in self.pairs().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({i},{j})")?;
        }
        f.write_str("}")
    }
}

fn is_transitive(r: &Relation) -> bool {
    (0..r.n).all(|i| Bits(r.rows[i]).all(|j| r.rows[j] & !r.rows[i] == 0))
}

fn is_complete(r: &Relation) -> bool {
    let full = full_mask(r.n);
    (0..r.n).all(|i| (r.rows[i] | r.predecessors(i) | 1 << i) == full)
}

fn is_asymmetric(r: &Relation) -> bool {
    r.pairs().all(|(i, j)| !r.contains(j, i))
}

// i R k implies i R j or j R k, for every j.
fn is_negatively_transitive(r: &Relation) -> bool {
    let full = full_mask(r.n);
    let preds: Vec<u32> = (0..r.n).map(|k| r.predecessors(k)).collect();
    r.pairs().all(|(i, k)| r.rows[i] | preds[k] == full)
}

// (i R j and i' R j') implies (i R j' or i' R j).
fn satisfies_two_plus_two(r: &Relation) -> bool {
    let rel: Vec<(usize, usize)> = r.pairs().collect();
    rel.iter().all(|&(i, j)| {
        rel.iter()
            .all(|&(i2, j2)| r.contains(i, j2) || r.contains(i2, j))
    })
}

// (i R i' and i' R i'') implies (i R j or j R i''), for every j.
fn satisfies_three_plus_one(r: &Relation) -> bool {
    let full = full_mask(r.n);
    let preds: Vec<u32> = (0..r.n).map(|k| r.predecessors(k)).collect();
    (0..r.n).all(|i| {
        Bits(r.rows[i]).all(|mid| Bits(r.rows[mid]).all(|top| r.rows[i] | preds[top] == full))
    })
}

/// Checks the combinatorial axioms of `kind`.
pub fn is_order(r: &Relation, kind: OrderKind) -> bool {
    let irreflexive = (0..r.n).all(|i| !r.contains(i, i));
    if !irreflexive {
        return false;
    }
    match kind {
        OrderKind::LinearOrder => is_transitive(r) && is_complete(r),
        OrderKind::WeakOrder => is_asymmetric(r) && is_negatively_transitive(r),
        OrderKind::IntervalOrder => satisfies_two_plus_two(r),
        OrderKind::Semiorder => satisfies_two_plus_two(r) && satisfies_three_plus_one(r),
    }
}

/// 0/1 vector over ordered pairs with ones exactly on the pairs of `r`.
pub fn characteristic_vector(r: &Relation) -> PairVector {
    PairVector::from_fn(r.n, |i, j| if r.contains(i, j) { 1.0 } else { 0.0 })
}

/// Layer index of every alternative: `i R j` iff `u[i] < u[j]`.
pub fn weak_order_utility(r: &Relation) -> Result<Vec<usize>> {
    if !is_order(r, OrderKind::WeakOrder) {
        return Err(Error::NotAWeakOrder);
    }
    // Predecessor sets of a weak order are nested, so their sizes rank the layers.
    let sizes: Vec<u32> = (0..r.n).map(|i| r.predecessors(i).count_ones()).collect();
    let mut distinct = sizes.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let u: Vec<usize> = sizes
        .iter()
        .map(|s| distinct.binary_search(s).unwrap())
        .collect();
    for i in 0..r.n {
        for j in 0..r.n {
            if i != j && r.contains(i, j) != (u[i] < u[j]) {
                return Err(Error::InternalVerificationFailed(
                    "layer indices do not reproduce the weak order",
                ));
            }
        }
    }
    Ok(u)
}

/// Interval endpoints `lo[i] <= hi[i]` with `i R j` iff `hi[i] < lo[j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalRepresentation {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl IntervalRepresentation {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                found: hi.len(),
            });
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn n(&self) -> usize {
        self.lo.len()
    }

    pub fn is_well_ordered(&self) -> bool {
        self.lo.iter().zip(&self.hi).all(|(l, h)| l <= h)
    }

    /// Injective endpoints with disjoint lower and upper images.
    pub fn is_normalized(&self) -> bool {
        let mut all: Vec<f64> = self.lo.iter().chain(&self.hi).copied().collect();
        all.sort_by(|a, b| a.partial_cmp(b).unwrap());
        all.windows(2).all(|w| w[0] < w[1])
    }

    /// `lo[i] < lo[j]` implies `hi[i] <= hi[j]`.
    pub fn has_no_nested_intervals(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..n).all(|j| !(self.lo[i] < self.lo[j]) || self.hi[i] <= self.hi[j]))
    }

    /// The interval order this representation encodes.
    pub fn relation(&self) -> Relation {
        let n = self.n();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i && self.hi[i] < self.lo[j])
                    .fold(0u32, |acc, j| acc | 1 << j)
            })
            .collect();
        Relation::from_rows_unchecked(n, rows)
    }

    pub fn represents(&self, r: &Relation) -> bool {
        self.n() == r.n() && self.is_well_ordered() && self.relation() == *r
    }
}

/// Builds a normalized representation of an interval order or semiorder.
///
/// Endpoints are the distinct slots `0..2n`. For semiorders no interval
/// strictly contains another.
pub fn interval_representation(r: &Relation, kind: OrderKind) -> Result<IntervalRepresentation> {
    if !matches!(kind, OrderKind::IntervalOrder | OrderKind::Semiorder) {
        return Err(Error::UnsupportedKind(kind));
    }
    if !is_order(r, kind) {
        return Err(Error::NotAnOrderOfKind(kind));
    }
    let n = r.n;
    let preds: Vec<u32> = (0..n).map(|i| r.predecessors(i)).collect();

    // Distinct predecessor sets form a chain; sizes give the chain rank.
    let mut chain: Vec<u32> = preds.clone();
    chain.sort_by_key(|m| (m.count_ones(), *m));
    chain.dedup();
    let rank = |m: u32| chain.iter().position(|&c| c == m).unwrap();

    // Provisional endpoints: lo = rank of own predecessor set, hi = last chain
    // rank whose set does not contain the alternative.
    let lo0: Vec<usize> = preds.iter().map(|&m| rank(m)).collect();
    let hi0: Vec<usize> = (0..n)
        .map(|i| {
            chain
                .iter()
                .rposition(|&c| c >> i & 1 == 0)
                .expect("the empty set is always in the chain")
        })
        .collect();

    // Spread to distinct slots. At equal provisional value lower endpoints
    // come first; within a type, alternatives follow (lo0, hi0, index).
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (lo0[i], hi0[i], i));
    let mut key = vec![0usize; n];
    for (pos, &i) in order.iter().enumerate() {
        key[i] = pos;
    }
    let mut endpoints: Vec<(usize, u8, usize, usize)> = Vec::with_capacity(2 * n);
    for i in 0..n {
        endpoints.push((lo0[i], 0, key[i], i));
        endpoints.push((hi0[i], 1, key[i], i));
    }
    endpoints.sort_unstable();
    let mut lo = vec![0.0; n];
    let mut hi = vec![0.0; n];
    for (slot, &(_, side, _, i)) in endpoints.iter().enumerate() {
        if side == 0 {
            lo[i] = slot as f64;
        } else {
            hi[i] = slot as f64;
        }
    }

    let rep = IntervalRepresentation { lo, hi };
    if !rep.is_well_ordered() {
        return Err(Error::InternalVerificationFailed(
            "lower endpoint above upper",
        ));
    }
    if !rep.is_normalized() {
        return Err(Error::InternalVerificationFailed("endpoints not distinct"));
    }
    if rep.relation() != *r {
        return Err(Error::InternalVerificationFailed(
            "endpoints do not reproduce the relation",
        ));
    }
    if kind == OrderKind::Semiorder && !rep.has_no_nested_intervals() {
        return Err(Error::InternalVerificationFailed("nested intervals"));
    }
    Ok(rep)
}

/// Upper limits on `n` for [`enumerate_orders_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationCaps {
    pub linear: usize,
    pub weak: usize,
    pub interval: usize,
    pub semiorder: usize,
}

impl Default for EnumerationCaps {
    fn default() -> Self {
        Self {
            linear: 8,
            weak: 6,
            interval: 6,
            semiorder: 6,
        }
    }
}

impl EnumerationCaps {
    pub fn uniform(cap: usize) -> Self {
        Self {
            linear: cap,
            weak: cap,
            interval: cap,
            semiorder: cap,
        }
    }

    pub fn cap(&self, kind: OrderKind) -> usize {
        match kind {
            OrderKind::LinearOrder => self.linear,
            OrderKind::WeakOrder => self.weak,
            OrderKind::IntervalOrder => self.interval,
            OrderKind::Semiorder => self.semiorder,
        }
    }

    /// Same caps with the one for `kind` replaced.
    pub fn with(mut self, kind: OrderKind, cap: usize) -> Self {
        *match kind {
            OrderKind::LinearOrder => &mut self.linear,
            OrderKind::WeakOrder => &mut self.weak,
            OrderKind::IntervalOrder => &mut self.interval,
            OrderKind::Semiorder => &mut self.semiorder,
        } = cap;
        self
    }
}

/// Largest `n` handled by filtering all irreflexive relations.
const FILTER_LIMIT: usize = 4;

pub fn enumerate_orders(n: usize, kind: OrderKind) -> Result<Vec<Relation>> {
    enumerate_orders_with(n, kind, &EnumerationCaps::default())
}

/// Every order of `kind` on `0..n` exactly once, sorted.
///
/// Small `n` filters all irreflexive relations; larger `n` decodes the
/// source–sink paths of the order network.
pub fn enumerate_orders_with(
    n: usize,
    kind: OrderKind,
    caps: &EnumerationCaps,
) -> Result<Vec<Relation>> {
    let cap = caps.cap(kind);
    if n > cap {
        return Err(Error::CapExceeded {
            what: "enumeration size",
            requested: n as u128,
            cap: cap as u128,
        });
    }
    if n <= FILTER_LIMIT {
        Ok(filter_orders(n, kind))
    } else {
        orders_from_paths(n, kind)
    }
}

/// Brute force over all `2^(n(n-1))` irreflexive relations.
pub(crate) fn filter_orders(n: usize, kind: OrderKind) -> Vec<Relation> {
    let off: Vec<(usize, usize)> = crate::pair::pairs(n).collect();
    let total = 1u64 << off.len();
    let mut out = BTreeSet::new();
    for bits in 0..total {
        let mut rows = vec![0u32; n];
        for (k, &(i, j)) in off.iter().enumerate() {
            if bits >> k & 1 == 1 {
                rows[i] |= 1 << j;
            }
        }
        let r = Relation::from_rows_unchecked(n, rows);
        if is_order(&r, kind) {
            out.insert(r);
        }
    }
    out.into_iter().collect()
}

fn orders_from_paths(n: usize, kind: OrderKind) -> Result<Vec<Relation>> {
    let net = crate::network::build_network(n, kind)?;
    let mut out = BTreeSet::new();
    crate::flow::for_each_path(&net, |arcs| {
        out.insert(crate::flow::decode_arcs(&net, arcs));
    });
    Ok(out.into_iter().collect())
}
