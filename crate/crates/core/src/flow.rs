//! Flows on an order network and its flow polytope.
//!
//! The flow polytope is the set of nonnegative flows of value one; its
//! vertices are the indicator vectors of source–sink paths, so minimizing a
//! linear function over it is a shortest-path problem on a DAG.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::network::{Network, NodeKey};
use crate::relation::{interval_representation, is_order, weak_order_utility, OrderKind, Relation};

/// Absolute tolerance for conservation and flow value checks.
pub const CONSERVATION_TOLERANCE: f64 = 1e-9;

/// Default limit for [`enumerate_paths`].
pub const DEFAULT_PATH_CAP: u128 = 1_000_000;

/// A real vector indexed by the arcs of a network.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowVector {
    values: Vec<f64>,
}

impl FlowVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            values: vec![0.0; len],
        }
    }

    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("flow values must be finite"));
        }
        Ok(Self { values })
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `Φ(B)`: total flow on a set of arcs.
    pub fn total(&self, arcs: impl IntoIterator<Item = usize>) -> f64 {
        arcs.into_iter().map(|a| self.values[a]).sum()
    }
}

/// A source–sink path given by its arc indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathRef {
    arcs: Vec<usize>,
}

impl PathRef {
    /// Wraps arc indices; validity is checked against a network with [`PathRef::validate`].
    pub fn new(arcs: Vec<usize>) -> Self {
        Self { arcs }
    }

    #[inline]
    pub fn arcs(&self) -> &[usize] {
        &self.arcs
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn validate(&self, net: &Network) -> Result<()> {
        let Some(&first) = self.arcs.first() else {
            return Err(Error::InvalidPath("empty path"));
        };
        if self.arcs.iter().any(|&a| a >= net.arc_count()) {
            return Err(Error::InvalidPath("arc index out of range"));
        }
        if net.tail(first) != net.source() {
            return Err(Error::InvalidPath("path does not start at the source"));
        }
        if self
            .arcs
            .windows(2)
            .any(|w| net.head(w[0]) != net.tail(w[1]))
        {
            return Err(Error::InvalidPath("consecutive arcs do not meet"));
        }
        if net.head(*self.arcs.last().unwrap()) != net.sink() {
            return Err(Error::InvalidPath("path does not end at the sink"));
        }
        Ok(())
    }
}

/// Checks nonnegativity, conservation away from source and sink, and the
/// net out-flow at the source.
pub fn is_flow(net: &Network, flow: &FlowVector, value: f64) -> bool {
    if flow.len() != net.arc_count() || flow.values.iter().any(|v| !(*v >= 0.0)) {
        return false;
    }
    (0..net.node_count()).all(|v| {
        let out = flow.total(net.out_arcs(v));
        let inn = flow.total(net.in_arcs(v));
        let expected = if v == net.source() {
            value
        } else if v == net.sink() {
            return true;
        } else {
            0.0
        };
        (out - inn - expected).abs() <= CONSERVATION_TOLERANCE
    })
}

/// One equality row: `Σ coefficient · Φ_arc = rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearRow {
    pub name: String,
    pub node: usize,
    pub coefficients: Vec<(usize, f64)>,
    pub rhs: f64,
}

/// Node-balance equalities plus `Φ >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalDescription {
    pub equalities: Vec<LinearRow>,
    pub nonnegativity: usize,
}

impl CanonicalDescription {
    /// Number of inequalities, i.e. the arc count.
    pub fn size(&self) -> usize {
        self.nonnegativity
    }

    pub fn variable_count(&self) -> usize {
        self.nonnegativity
    }

    pub fn is_satisfied(&self, flow: &FlowVector, tol: f64) -> bool {
        flow.len() == self.nonnegativity
            && flow.values().iter().all(|&v| v >= -tol)
            && self.equalities.iter().all(|row| {
                let lhs: f64 = row
                    .coefficients
                    .iter()
                    .map(|&(a, c)| c * flow.values()[a])
                    .sum();
                (lhs - row.rhs).abs() <= tol
            })
    }
}

/// The balance system of the flow polytope; the sink row is omitted since it
/// is implied by the others.
pub fn canonical_description(net: &Network) -> CanonicalDescription {
    let equalities = (0..net.node_count())
        .filter(|&v| v != net.sink())
        .map(|v| {
            let mut coefficients: Vec<(usize, f64)> = net.out_arcs(v).map(|a| (a, 1.0)).collect();
            coefficients.extend(net.in_arcs(v).map(|a| (a, -1.0)));
            let source = v == net.source();
            LinearRow {
                name: if source {
                    String::from("source_value")
                } else {
                    format!("balance_{v}")
                },
                node: v,
                coefficients,
                rhs: if source { 1.0 } else { 0.0 },
            }
        })
        .collect();
    CanonicalDescription {
        equalities,
        nonnegativity: net.arc_count(),
    }
}

pub fn path_to_flow(net: &Network, path: &PathRef) -> Result<FlowVector> {
    path.validate(net)?;
    let mut flow = FlowVector::zeros(net.arc_count());
    for &a in path.arcs() {
        flow.values[a] = 1.0;
    }
    Ok(flow)
}

/// Relation read off a path: each arc puts every alternative already below
/// the level before every alternative entering on that arc.
pub fn decode_path(net: &Network, path: &PathRef) -> Result<Relation> {
    path.validate(net)?;
    Ok(decode_arcs(net, path.arcs()))
}

pub(crate) fn decode_arcs(net: &Network, arcs: &[usize]) -> Relation {
    let mut rows = vec![0u32; net.n()];
    for &a in arcs {
        let (tail, head) = (net.node(net.tail(a)), net.node(net.head(a)));
        let entering = head.entered() & !tail.entered();
        if entering == 0 {
            continue;
        }
        for i in crate::bits::Bits(tail.below()) {
            rows[i] |= entering;
        }
    }
    Relation::from_rows_unchecked(net.n(), rows)
}

/// Number of source–sink paths.
pub fn path_count(net: &Network) -> u128 {
    let mut count = vec![0u128; net.node_count()];
    count[net.sink()] = 1;
    for v in (0..net.node_count()).rev() {
        if v != net.sink() {
            count[v] = net
                .out_arcs(v)
                .map(|a| count[net.head(a)])
                .fold(0u128, |acc, c| acc.saturating_add(c));
        }
    }
    count[net.source()]
}

/// Visits every source–sink path in depth-first lexicographic arc order.
pub fn for_each_path(net: &Network, mut visit: impl FnMut(&[usize])) {
    let mut arcs: Vec<usize> = Vec::new();
    let mut cursors: Vec<core::ops::Range<usize>> = vec![net.out_arcs(net.source())];
    while let Some(cursor) = cursors.last_mut() {
        match cursor.next() {
            Some(a) => {
                arcs.push(a);
                let head = net.head(a);
                if head == net.sink() {
                    visit(&arcs);
                    arcs.pop();
                } else {
                    cursors.push(net.out_arcs(head));
                }
            }
            None => {
                cursors.pop();
                arcs.pop();
            }
        }
    }
}

pub fn enumerate_paths(net: &Network) -> Result<Vec<PathRef>> {
    enumerate_paths_with_cap(net, DEFAULT_PATH_CAP)
}

pub fn enumerate_paths_with_cap(net: &Network, cap: u128) -> Result<Vec<PathRef>> {
    let total = path_count(net);
    if total > cap {
        return Err(Error::CapExceeded {
            what: "path count",
            requested: total,
            cap,
        });
    }
    let mut out = Vec::with_capacity(total as usize);
    for_each_path(net, |arcs| out.push(PathRef::new(arcs.to_vec())));
    Ok(out)
}

/// A minimum-cost source–sink path.
///
/// One backward pass over the topological node order; among equal-cost
/// choices the lowest arc index wins at every node, which makes the result
/// the lexicographically first optimal path.
///
/// # Panics
///
/// If `cost.len()` differs from the arc count.
pub fn shortest_path_lmo(net: &Network, cost: &[f64]) -> PathRef {
    assert_eq!(cost.len(), net.arc_count(), "one cost per arc");
    let mut dist = vec![f64::INFINITY; net.node_count()];
    let mut choice = vec![usize::MAX; net.node_count()];
    dist[net.sink()] = 0.0;
    for v in (0..net.node_count()).rev() {
        for a in net.out_arcs(v) {
            let d = cost[a] + dist[net.head(a)];
            if d < dist[v] {
                dist[v] = d;
                choice[v] = a;
            }
        }
    }
    let mut arcs = Vec::new();
    let mut v = net.source();
    while v != net.sink() {
        let a = choice[v];
        arcs.push(a);
        v = net.head(a);
    }
    PathRef::new(arcs)
}

/// The path traced by sweeping a level through a numeric representation of `r`.
///
/// Linear and weak orders use their layer indices; interval orders and
/// semiorders use the representation of [`interval_representation`].
pub fn path_of_order(net: &Network, r: &Relation) -> Result<PathRef> {
    let kind = net.kind();
    if r.n() != net.n() {
        return Err(Error::DimensionMismatch {
            expected: net.n(),
            found: r.n(),
        });
    }
    if !is_order(r, kind) {
        return Err(Error::NotAnOrderOfKind(kind));
    }
    let mut keys: Vec<NodeKey> = vec![net.node(net.source()).clone()];
    match kind {
        OrderKind::LinearOrder | OrderKind::WeakOrder => {
            let u = weak_order_utility(r)?;
            let layers = u.iter().max().map_or(0, |m| m + 1);
            let mut x = 0u32;
            for layer in 0..layers {
                x |= u
                    .iter()
                    .enumerate()
                    .filter(|(_, &l)| l == layer)
                    .fold(0, |acc, (i, _)| acc | 1 << i);
                if kind == OrderKind::LinearOrder {
                    debug_assert_eq!((x & !keys.last().unwrap().entered()).count_ones(), 1);
                }
                keys.push(NodeKey::Subset(x));
            }
        }
        OrderKind::IntervalOrder | OrderKind::Semiorder => {
            let rep = interval_representation(r, kind)?;
            let mut endpoints: Vec<(f64, bool, usize)> = (0..r.n())
                .flat_map(|i| [(rep.lo()[i], false, i), (rep.hi()[i], true, i)])
                .collect();
            endpoints.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let (mut x, mut y) = (0u32, 0u32);
            let mut queue: Vec<u8> = Vec::new();
            for (_, upper, i) in endpoints {
                if upper {
                    y |= 1 << i;
                    if kind == OrderKind::Semiorder {
                        if queue.first() != Some(&(i as u8)) {
                            return Err(Error::InternalVerificationFailed(
                                "upper endpoints out of queue order",
                            ));
                        }
                        queue.remove(0);
                    }
                } else {
                    x |= 1 << i;
                    queue.push(i as u8);
                }
                keys.push(match kind {
                    OrderKind::IntervalOrder => NodeKey::SubsetPair { x, y },
                    _ => NodeKey::SubsetPairOrder {
                        x,
                        y,
                        order: queue.clone(),
                    },
                });
            }
        }
    }
    let mut arcs = Vec::with_capacity(keys.len() - 1);
    for w in keys.windows(2) {
        let tail = net.node_index(&w[0]).ok_or(Error::ArcNotInNetwork)?;
        let head = net.node_index(&w[1]).ok_or(Error::ArcNotInNetwork)?;
        arcs.push(net.arc_index(tail, head).ok_or(Error::ArcNotInNetwork)?);
    }
    let path = PathRef::new(arcs);
    path.validate(net)?;
    Ok(path)
}

/// Distinct relations decoded from all paths.
pub fn decoded_orders(net: &Network) -> BTreeSet<Relation> {
    let mut out = BTreeSet::new();
    for_each_path(net, |arcs| {
        out.insert(decode_arcs(net, arcs));
    });
    out
}
