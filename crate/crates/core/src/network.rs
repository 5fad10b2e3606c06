//! The four order networks.
//!
//! | kind | nodes | arcs |
//! |------|-------|------|
//! | linear | subsets `X` | `X -> X + i` |
//! | weak | subsets `X` | `X -> Z` for every strict superset `Z` |
//! | interval | pairs `Y ⊆ X` | grow `X` by one, or grow `Y` by one inside `X` |
//! | semiorder | triples `(X, Y, L)`, `L` a sequence of `X \ Y` | append `i` to `L` and `X`, or move the head of `L` into `Y` |
//!
//! Nodes are stored sorted by `(|X|, |Y|, X, Y, L)`, which is a topological
//! order for all four constructions. Arcs are sorted by `(tail, head)`, so the
//! out-arcs of a node form a contiguous index range.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::Range;

use crate::bits::{full_mask, nonempty_submasks, Bits};
use crate::error::{Error, Result};
use crate::relation::OrderKind;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NodeKey {
    Subset(u32),
    SubsetPair { x: u32, y: u32 },
    SubsetPairOrder { x: u32, y: u32, order: Vec<u8> },
}

impl NodeKey {
    /// Alternatives whose lower end lies below the current level (`X`).
    pub fn entered(&self) -> u32 {
        match *self {
            NodeKey::Subset(x) => x,
            NodeKey::SubsetPair { x, .. } | NodeKey::SubsetPairOrder { x, .. } => x,
        }
    }

    /// Alternatives lying entirely below the current level: `X` for the
    /// subset networks, `Y` for the interval and semiorder networks.
    pub fn below(&self) -> u32 {
        match *self {
            NodeKey::Subset(x) => x,
            NodeKey::SubsetPair { y, .. } | NodeKey::SubsetPairOrder { y, .. } => y,
        }
    }

    fn second(&self) -> u32 {
        match *self {
            NodeKey::Subset(_) => 0,
            NodeKey::SubsetPair { y, .. } | NodeKey::SubsetPairOrder { y, .. } => y,
        }
    }

    fn order(&self) -> &[u8] {
        match self {
            NodeKey::SubsetPairOrder { order, .. } => order,
            _ => &[],
        }
    }

    fn tag(&self) -> u8 {
        match self {
            NodeKey::Subset(_) => 0,
            NodeKey::SubsetPair { .. } => 1,
            NodeKey::SubsetPairOrder { .. } => 2,
        }
    }

    fn is_valid_for(&self, n: usize, kind: OrderKind) -> bool {
        let full = full_mask(n);
        match (kind, self) {
            (OrderKind::LinearOrder | OrderKind::WeakOrder, NodeKey::Subset(x)) => x & !full == 0,
            (OrderKind::IntervalOrder, NodeKey::SubsetPair { x, y }) => {
                x & !full == 0 && y & !x == 0
            }
            (OrderKind::Semiorder, NodeKey::SubsetPairOrder { x, y, order }) => {
                if x & !full != 0 || y & !x != 0 {
                    return false;
                }
                let mask = order.iter().try_fold(0u32, |acc, &i| {
                    let bit = 1u32.checked_shl(i as u32)?;
                    (acc & bit == 0).then_some(acc | bit)
                });
                mask == Some(x & !y)
            }
            _ => false,
        }
    }
}

impl Ord for NodeKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.tag()
            .cmp(&other.tag())
            .then(
                self.entered()
                    .count_ones()
                    .cmp(&other.entered().count_ones()),
            )
            .then(self.second().count_ones().cmp(&other.second().count_ones()))
            .then(self.entered().cmp(&other.entered()))
            .then(self.second().cmp(&other.second()))
            .then_with(|| self.order().cmp(other.order()))
    }
}

impl PartialOrd for NodeKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct SetDisplay(u32);

impl fmt::Display for SetDisplay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in Bits(self.0).enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Display for NodeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeKey::Subset(x) => write!(f, "{}", SetDisplay(*x)),
            NodeKey::SubsetPair { x, y } => write!(f, "({},{})", SetDisplay(*x), SetDisplay(*y)),
            NodeKey::SubsetPairOrder { x, y, order } => {
                write!(f, "({},{},[", SetDisplay(*x), SetDisplay(*y))?;
                for (k, i) in order.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{i}")?;
                }
                f.write_str("])")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
}

/// Upper limits on `n` for [`build_network_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NetworkCaps {
    pub linear: usize,
    pub weak: usize,
    pub interval: usize,
    pub semiorder: usize,
}

impl Default for NetworkCaps {
    fn default() -> Self {
        // Each keeps the arc count at or below roughly 1.4e7.
        Self {
            linear: 20,
            weak: 14,
            interval: 13,
            semiorder: 7,
        }
    }
}

impl NetworkCaps {
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

/// A fully materialized acyclic order network.
#[derive(Clone, Debug)]
pub struct Network {
    n: usize,
    kind: OrderKind,
    nodes: Vec<NodeKey>,
    tails: Vec<u32>,
    heads: Vec<u32>,
    out_offsets: Vec<usize>,
    in_offsets: Vec<usize>,
    in_arcs: Vec<u32>,
    source: usize,
    sink: usize,
}

impl Network {
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    #[inline]
    pub fn arc_count(&self) -> usize {
        self.tails.len()
    }

    pub fn nodes(&self) -> &[NodeKey] {
        &self.nodes
    }

    #[inline]
    pub fn node(&self, v: usize) -> &NodeKey {
        &self.nodes[v]
    }

    #[inline]
    pub fn arc(&self, a: usize) -> Arc {
        Arc {
            tail: self.tails[a] as usize,
            head: self.heads[a] as usize,
        }
    }

    #[inline]
    pub fn tail(&self, a: usize) -> usize {
        self.tails[a] as usize
    }

    #[inline]
    pub fn head(&self, a: usize) -> usize {
        self.heads[a] as usize
    }

    pub fn arcs(&self) -> impl ExactSizeIterator<Item = Arc> + '_ {
        (0..self.arc_count()).map(move |a| self.arc(a))
    }

    #[inline]
    pub fn source(&self) -> usize {
        self.source
    }

    #[inline]
    pub fn sink(&self) -> usize {
        self.sink
    }

    /// Arcs leaving `v`, as an index range.
    #[inline]
    pub fn out_arcs(&self, v: usize) -> Range<usize> {
        self.out_offsets[v]..self.out_offsets[v + 1]
    }

    /// Arcs entering `v`, in increasing index order.
    pub fn in_arcs(&self, v: usize) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.in_arcs[self.in_offsets[v]..self.in_offsets[v + 1]]
            .iter()
            .map(|&a| a as usize)
    }

    pub fn node_index(&self, key: &NodeKey) -> Option<usize> {
        self.nodes.binary_search(key).ok()
    }

    pub fn arc_index(&self, tail: usize, head: usize) -> Option<usize> {
        if tail >= self.node_count() {
            return None;
        }
        let range = self.out_arcs(tail);
        let start = range.start;
        self.heads[range]
            .binary_search(&(head as u32))
            .ok()
            .map(|k| start + k)
    }

    /// True when every arc points from a lower to a higher node index.
    pub fn is_topologically_ordered(&self) -> bool {
        self.tails.iter().zip(&self.heads).all(|(t, h)| t < h)
    }
}

pub fn build_network(n: usize, kind: OrderKind) -> Result<Network> {
    build_network_with(n, kind, &NetworkCaps::default())
}

pub fn build_network_with(n: usize, kind: OrderKind, caps: &NetworkCaps) -> Result<Network> {
    if n == 0 {
        return Err(Error::InvalidConfig(
            "networks need at least one alternative",
        ));
    }
    let cap = caps.cap(kind).min(crate::relation::MAX_ALTERNATIVES - 1);
    if n > cap {
        return Err(Error::CapExceeded {
            what: "network size",
            requested: n as u128,
            cap: cap as u128,
        });
    }
    let full = full_mask(n);
    let mut nodes = generate_nodes(n, kind);
    nodes.sort_unstable();

    let mut tails = Vec::new();
    let mut heads = Vec::new();
    let mut out_offsets = Vec::with_capacity(nodes.len() + 1);
    out_offsets.push(0);
    let mut scratch: Vec<u32> = Vec::new();
    for (v, key) in nodes.iter().enumerate() {
        scratch.clear();
        let index = |k: &NodeKey| nodes.binary_search(k).expect("successor is a node") as u32;
        match key {
            NodeKey::Subset(x) => {
                let rest = full & !x;
                match kind {
                    OrderKind::LinearOrder => {
                        scratch.extend(Bits(rest).map(|i| index(&NodeKey::Subset(x | 1 << i))))
                    }
                    _ => scratch
                        .extend(nonempty_submasks(rest).map(|b| index(&NodeKey::Subset(x | b)))),
                }
            }
            &NodeKey::SubsetPair { x, y } => {
                scratch.extend(
                    Bits(full & !x).map(|i| index(&NodeKey::SubsetPair { x: x | 1 << i, y })),
                );
                scratch
                    .extend(Bits(x & !y).map(|i| index(&NodeKey::SubsetPair { x, y: y | 1 << i })));
            }
            NodeKey::SubsetPairOrder { x, y, order } => {
                for i in Bits(full & !x) {
                    let mut next = order.clone();
                    next.push(i as u8);
                    scratch.push(index(&NodeKey::SubsetPairOrder {
                        x: x | 1 << i,
                        y: *y,
                        order: next,
                    }));
                }
                if let Some((&first, rest)) = order.split_first() {
                    scratch.push(index(&NodeKey::SubsetPairOrder {
                        x: *x,
                        y: y | 1 << first,
                        order: rest.to_vec(),
                    }));
                }
            }
        }
        scratch.sort_unstable();
        tails.extend(core::iter::repeat_n(v as u32, scratch.len()));
        heads.extend_from_slice(&scratch);
        out_offsets.push(heads.len());
    }

    // In-adjacency by counting sort on heads; arc ids stay increasing.
    let mut in_offsets = vec![0usize; nodes.len() + 1];
    for &h in &heads {
        in_offsets[h as usize + 1] += 1;
    }
    for v in 0..nodes.len() {
        in_offsets[v + 1] += in_offsets[v];
    }
    let mut fill = in_offsets.clone();
    let mut in_arcs = vec![0u32; heads.len()];
    for (a, &h) in heads.iter().enumerate() {
        in_arcs[fill[h as usize]] = a as u32;
        fill[h as usize] += 1;
    }

    let (source_key, sink_key) = match kind {
        OrderKind::LinearOrder | OrderKind::WeakOrder => {
            (NodeKey::Subset(0), NodeKey::Subset(full))
        }
        OrderKind::IntervalOrder => (
            NodeKey::SubsetPair { x: 0, y: 0 },
            NodeKey::SubsetPair { x: full, y: full },
        ),
        OrderKind::Semiorder => (
            NodeKey::SubsetPairOrder {
                x: 0,
                y: 0,
                order: Vec::new(),
            },
            NodeKey::SubsetPairOrder {
                x: full,
                y: full,
                order: Vec::new(),
            },
        ),
    };
    let source = nodes.binary_search(&source_key).unwrap();
    let sink = nodes.binary_search(&sink_key).unwrap();
    Ok(Network {
        n,
        kind,
        nodes,
        tails,
        heads,
        out_offsets,
        in_offsets,
        in_arcs,
        source,
        sink,
    })
}

fn generate_nodes(n: usize, kind: OrderKind) -> Vec<NodeKey> {
    let full = full_mask(n);
    let subsets = 0..=full;
    match kind {
        OrderKind::LinearOrder | OrderKind::WeakOrder => subsets.map(NodeKey::Subset).collect(),
        OrderKind::IntervalOrder => {
            let mut out = Vec::new();
            for x in subsets {
                out.push(NodeKey::SubsetPair { x, y: x });
                out.extend(nonempty_submasks(x).map(|b| NodeKey::SubsetPair { x, y: x & !b }));
            }
            out
        }
        OrderKind::Semiorder => {
            let mut out = Vec::new();
            for x in subsets {
                let mut free = vec![x];
                free.extend(nonempty_submasks(x).map(|b| x & !b));
                for y in free {
                    let items: Vec<u8> = Bits(x & !y).map(|i| i as u8).collect();
                    for_each_permutation(&items, &mut |order| {
                        out.push(NodeKey::SubsetPairOrder {
                            x,
                            y,
                            order: order.to_vec(),
                        })
                    });
                }
            }
            out
        }
    }
}

fn for_each_permutation(items: &[u8], f: &mut impl FnMut(&[u8])) {
    fn rec(prefix: &mut Vec<u8>, rest: &mut Vec<u8>, f: &mut impl FnMut(&[u8])) {
        if rest.is_empty() {
            f(prefix);
            return;
        }
        for k in 0..rest.len() {
            let item = rest.remove(k);
            prefix.push(item);
            rec(prefix, rest, f);
            prefix.pop();
            rest.insert(k, item);
        }
    }
    rec(&mut Vec::new(), &mut items.to_vec(), f)
}

fn falling_factorial(n: u128, t: u128) -> u128 {
    (0..t).map(|k| n - k).product()
}

/// Closed-form node count of the network of `kind` on `n` alternatives.
pub fn count_nodes_formula(n: usize, kind: OrderKind) -> u128 {
    let n = n as u128;
    match kind {
        OrderKind::LinearOrder | OrderKind::WeakOrder => 1 << n,
        OrderKind::IntervalOrder => 3u128.pow(n as u32),
        OrderKind::Semiorder => (0..=n).map(|t| falling_factorial(n, t) << (n - t)).sum(),
    }
}

/// Closed-form arc count of the network of `kind` on `n >= 1` alternatives.
///
/// For semiorders this is the published count `Σ_t n!/(n-t)! · 2^(n-t-1) · (n+t)`,
/// which assumes `n - |Y|` arcs leave every node `(X, Y, L)`. The built
/// network moves only the head of `L` into `Y`, so it has
/// [`semiorder_fifo_arc_count`] arcs instead (fewer once `n >= 2`).
pub fn count_arcs_formula(n: usize, kind: OrderKind) -> u128 {
    let n = n as u128;
    match kind {
        OrderKind::LinearOrder => n << n.saturating_sub(1),
        OrderKind::WeakOrder => 3u128.pow(n as u32) - (1 << n),
        OrderKind::IntervalOrder if n == 0 => 0,
        OrderKind::IntervalOrder => 2 * n * 3u128.pow(n as u32 - 1),
        // 2^(n-t-1) (n+t) written as 2^(n-t) (n+t) / 2 so that t = n stays integral.
        OrderKind::Semiorder => (0..=n)
            .map(|t| (falling_factorial(n, t) << (n - t)) * (n + t) / 2)
            .sum(),
    }
}

/// Arc count of the built semiorder network: a node `(X, Y, L)` with
/// `|X \ Y| = t` has `n - |X|` append arcs plus one head-pop arc when `t > 0`.
pub fn semiorder_fifo_arc_count(n: usize) -> u128 {
    let n = n as u128;
    (0..=n)
        .map(|t| {
            let m = n - t;
            // Σ over Y ⊆ (m free alternatives) of (m - |Y|) = m 2^(m-1).
            let appends = if m == 0 { 0 } else { m << (m - 1) };
            let pops = if t > 0 { 1u128 << m } else { 0 };
            falling_factorial(n, t) * (appends + pops)
        })
        .sum()
}

fn arc_is_valid(n: usize, kind: OrderKind, tail: &NodeKey, head: &NodeKey) -> bool {
    if !tail.is_valid_for(n, kind) || !head.is_valid_for(n, kind) {
        return false;
    }
    let (x, z) = (tail.entered(), head.entered());
    match (tail, head) {
        (NodeKey::Subset(_), NodeKey::Subset(_)) => {
            let grown = z & !x;
            x & !z == 0 && grown != 0 && (kind == OrderKind::WeakOrder || grown.count_ones() == 1)
        }
        (&NodeKey::SubsetPair { y, .. }, &NodeKey::SubsetPair { y: t, .. }) => {
            x & !z == 0 && y & !t == 0 && (z & !x).count_ones() + (t & !y).count_ones() == 1
        }
        (
            NodeKey::SubsetPairOrder { y, order: l, .. },
            NodeKey::SubsetPairOrder { y: t, order: m, .. },
        ) => {
            if x != z {
                let grown = z & !x;
                grown.count_ones() == 1
                    && x & !z == 0
                    && y == t
                    && m.len() == l.len() + 1
                    && m[..l.len()] == l[..]
                    && 1u32 << m[l.len()] == grown
            } else {
                match l.split_first() {
                    Some((&first, rest)) => *t == y | 1 << first && m[..] == rest[..],
                    None => false,
                }
            }
        }
        _ => false,
    }
}

/// Encodes an arc as a word with one letter per alternative.
///
/// Weak orders use `a` (in `X`), `b` (in `Z \ X`), `c` (outside `Z`).
/// Interval orders use `a` (in `Y`), `b` (in `X \ Y`, stays out of `T`),
/// `c` (outside `Z`), `d` (enters `X`), `e` (in `X \ Y`, enters `T`).
pub fn word_encode_arc(
    n: usize,
    kind: OrderKind,
    tail: &NodeKey,
    head: &NodeKey,
) -> Result<String> {
    if !matches!(kind, OrderKind::WeakOrder | OrderKind::IntervalOrder) {
        return Err(Error::UnsupportedKind(kind));
    }
    if !arc_is_valid(n, kind, tail, head) {
        return Err(Error::ArcNotInNetwork);
    }
    let (x, z) = (tail.entered(), head.entered());
    let (y, t) = (tail.second(), head.second());
    let word = (0..n)
        .map(|i| {
            let bit = 1u32 << i;
            let (in_x, in_z) = (x & bit != 0, z & bit != 0);
            match kind {
                OrderKind::WeakOrder => match (in_x, in_z) {
                    (true, _) => 'a',
                    (false, true) => 'b',
                    (false, false) => 'c',
                },
                _ => {
                    let (in_y, in_t) = (y & bit != 0, t & bit != 0);
                    if in_y {
                        'a'
                    } else if in_x && in_t {
                        'e'
                    } else if in_x {
                        'b'
                    } else if in_z {
                        'd'
                    } else {
                        'c'
                    }
                }
            }
        })
        .collect();
    Ok(word)
}

/// Inverse of [`word_encode_arc`].
pub fn word_decode_arc(n: usize, kind: OrderKind, word: &str) -> Result<(NodeKey, NodeKey)> {
    let letters: Vec<char> = word.chars().collect();
    if letters.len() != n {
        return Err(Error::InvalidWord(alloc::format!(
            "`{word}` has length {}, expected {n}",
            letters.len()
        )));
    }
    let mut sets = [0u32; 5];
    for (i, c) in letters.iter().enumerate() {
        let slot = match (kind, c) {
            (OrderKind::WeakOrder | OrderKind::IntervalOrder, 'a') => 0,
            (OrderKind::WeakOrder | OrderKind::IntervalOrder, 'b') => 1,
            (OrderKind::WeakOrder | OrderKind::IntervalOrder, 'c') => 2,
            (OrderKind::IntervalOrder, 'd') => 3,
            (OrderKind::IntervalOrder, 'e') => 4,
            (OrderKind::WeakOrder | OrderKind::IntervalOrder, _) => {
                return Err(Error::InvalidWord(alloc::format!(
                    "letter `{c}` not allowed in `{word}`"
                )))
            }
            _ => return Err(Error::UnsupportedKind(kind)),
        };
        sets[slot] |= 1 << i;
    }
    let [a, b, _, d, e] = sets;
    let (tail, head) = match kind {
        OrderKind::WeakOrder => (NodeKey::Subset(a), NodeKey::Subset(a | b)),
        _ => (
            NodeKey::SubsetPair { x: a | b | e, y: a },
            NodeKey::SubsetPair {
                x: a | b | d | e,
                y: a | e,
            },
        ),
    };
    if !arc_is_valid(n, kind, &tail, &head) {
        return Err(Error::InvalidWord(alloc::format!(
            "`{word}` does not encode an arc"
        )));
    }
    Ok((tail, head))
}
