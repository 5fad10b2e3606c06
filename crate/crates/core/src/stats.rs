//! Paired-comparison choice data, its likelihood, and Monte Carlo Bayes
//! factors against the unrestricted per-pair model.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, Gamma};

use crate::error::{Error, Result};
use crate::math::{ln, sqrt};
use crate::network::Network;
use crate::optim::{is_member, Objective, SolverConfig};
use crate::pair::{pair_count, pair_index, PairVector};
use crate::projection::ProjectionMap;
use crate::relation::OrderKind;

/// Responses for one unordered pair `{i, j}` with `i < j`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct PairCounts {
    /// Times `j` was chosen over `i`.
    pub chose_j: u64,
    /// Times `i` was chosen over `j`.
    pub chose_i: u64,
    pub indifferent: u64,
}

impl PairCounts {
    pub const fn new(chose_j: u64, chose_i: u64, indifferent: u64) -> Self {
        Self {
            chose_j,
            chose_i,
            indifferent,
        }
    }

    pub fn total(&self) -> u64 {
        self.chose_j + self.chose_i + self.indifferent
    }

    fn swapped(self) -> Self {
        Self::new(self.chose_i, self.chose_j, self.indifferent)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChoiceData {
    n: usize,
    counts: Vec<PairCounts>,
}

fn unordered_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl ChoiceData {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            counts: vec![PairCounts::default(); n * n.saturating_sub(1) / 2],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Counts seen from `i`'s side: `chose_j` counts wins of `j`, whichever index is smaller.
    pub fn get(&self, i: usize, j: usize) -> PairCounts {
        assert!(
            i != j && i < self.n && j < self.n,
            "pair ({i}, {j}) out of range"
        );
        if i < j {
            self.counts[unordered_index(self.n, i, j)]
        } else {
            self.counts[unordered_index(self.n, j, i)].swapped()
        }
    }

    pub fn set(&mut self, i: usize, j: usize, counts: PairCounts) {
        assert!(
            i != j && i < self.n && j < self.n,
            "pair ({i}, {j}) out of range"
        );
        if i < j {
            self.counts[unordered_index(self.n, i, j)] = counts;
        } else {
            self.counts[unordered_index(self.n, j, i)] = counts.swapped();
        }
    }

    /// Times `j` was chosen when `{i, j}` was offered.
    pub fn chosen(&self, i: usize, j: usize) -> u64 {
        self.get(i, j).chose_j
    }

    pub fn has_indifference(&self) -> bool {
        self.counts.iter().any(|c| c.indifferent > 0)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(PairCounts::total).sum()
    }

    /// `(i, j, counts)` for every `i < j`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, PairCounts)> + '_ {
        let n = self.n;
        (0..n)
            .flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
            .zip(self.counts.iter())
            .map(|((i, j), &c)| (i, j, c))
    }
}

fn check_data(data: &ChoiceData, p: &PairVector) -> Result<()> {
    if data.n() != p.n() || p.dim() != pair_count(data.n()) {
        return Err(Error::DimensionMismatch {
            expected: pair_count(data.n()),
            found: p.dim(),
        });
    }
    Ok(())
}

fn xlogy(count: u64, prob: f64) -> f64 {
    if count == 0 {
        0.0
    } else if prob <= 0.0 {
        f64::NEG_INFINITY
    } else {
        count as f64 * ln(prob)
    }
}

pub fn log_likelihood(data: &ChoiceData, p: &PairVector) -> Result<f64> {
    check_data(data, p)?;
    Ok(data.iter().fold(0.0, |acc, (i, j, c)| {
        let (forward, backward) = (p.get(i, j), p.get(j, i));
        acc + xlogy(c.chose_j, forward)
            + xlogy(c.chose_i, backward)
            + xlogy(c.indifferent, 1.0 - forward - backward)
    }))
}

/// Gradient of [`log_likelihood`]; zero counts contribute nothing.
pub fn log_likelihood_gradient(data: &ChoiceData, p: &PairVector) -> Result<PairVector> {
    check_data(data, p)?;
    let mut g = PairVector::zeros(data.n());
    for (i, j, c) in data.iter() {
        let (forward, backward) = (p.get(i, j), p.get(j, i));
        let tie = if c.indifferent == 0 {
            0.0
        } else {
            c.indifferent as f64 / (1.0 - forward - backward)
        };
        let ratio = |count: u64, prob: f64| {
            if count == 0 {
                0.0
            } else {
                count as f64 / prob
            }
        };
        g.set(i, j, ratio(c.chose_j, forward) - tie);
        g.set(j, i, ratio(c.chose_i, backward) - tie);
    }
    Ok(g)
}

#[derive(Clone, Copy, Debug)]
struct PairTerm {
    forward: usize,
    backward: usize,
    chose_j: f64,
    chose_i: f64,
    indifferent: f64,
}

/// `-log_likelihood` with each logarithm continued linearly below the guard,
/// so the objective stays finite, convex and differentiable on all of pair space.
#[derive(Clone, Debug)]
pub struct NegLogLikelihood {
    terms: Vec<PairTerm>,
    guard: f64,
}

impl NegLogLikelihood {
    pub fn new(data: &ChoiceData, guard: f64) -> Self {
        let n = data.n();
        let terms = data
            .iter()
            .filter(|(_, _, c)| c.total() > 0)
            .map(|(i, j, c)| PairTerm {
                forward: pair_index(n, i, j),
                backward: pair_index(n, j, i),
                chose_j: c.chose_j as f64,
                chose_i: c.chose_i as f64,
                indifferent: c.indifferent as f64,
            })
            .collect();
        Self { terms, guard }
    }

    fn guarded_ln(&self, x: f64) -> f64 {
        if x >= self.guard {
            ln(x)
        } else {
            ln(self.guard) + (x - self.guard) / self.guard
        }
    }
}

impl Objective for NegLogLikelihood {
    fn value(&self, p: &[f64]) -> f64 {
        let term = |count: f64, x: f64| {
            if count == 0.0 {
                0.0
            } else {
                count * self.guarded_ln(x)
            }
        };
        let ll = self.terms.iter().fold(0.0, |acc, t| {
            let (f, b) = (p[t.forward], p[t.backward]);
            acc + term(t.chose_j, f) + term(t.chose_i, b) + term(t.indifferent, 1.0 - f - b)
        });
        0.0 - ll
    }

    fn gradient(&self, p: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|g| *g = 0.0);
        for t in &self.terms {
            let (f, b) = (p[t.forward], p[t.backward]);
            let tie = t.indifferent / (1.0 - f - b).max(self.guard);
            out[t.forward] = tie - t.chose_j / f.max(self.guard);
            out[t.backward] = tie - t.chose_i / b.max(self.guard);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BayesConfig {
    pub sample_count: u64,
    pub seed: u64,
    /// Dirichlet concentration for (j chosen, i chosen, indifferent).
    pub prior: [f64; 3],
    /// Supplies the membership tolerance and iteration budget.
    pub solver: SolverConfig,
}

impl Default for BayesConfig {
    fn default() -> Self {
        Self {
            sample_count: 100_000,
            seed: 0,
            prior: [1.0; 3],
            solver: SolverConfig::default(),
        }
    }
}

impl BayesConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sample_count == 0 {
            return Err(Error::InvalidConfig("sample_count must be at least 1"));
        }
        if self.prior.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
            return Err(Error::InvalidConfig(
                "prior concentrations must be positive",
            ));
        }
        self.solver.validate()
    }
}

const PRIOR_STREAM: u64 = 0;
const POSTERIOR_STREAM: u64 = 1;

#[derive(Clone, Copy, Debug)]
enum PairLaw {
    Dirichlet([Gamma<f64>; 3]),
    /// Forced choice: `p(j, i) = 1 - p(i, j)`.
    Beta(Beta<f64>),
}

/// Draws pair-space points from the encompassing prior or posterior.
///
/// Draw `k` depends only on the seed, the stream and `k`, so any subrange
/// can be generated independently and in any order.
#[derive(Clone, Debug)]
pub struct EncompassingSampler {
    n: usize,
    seed: u64,
    stream: u64,
    laws: Vec<PairLaw>,
}

impl EncompassingSampler {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn draw(&self, index: u64) -> PairVector {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..16].copy_from_slice(&self.stream.to_le_bytes());
        key[16..24].copy_from_slice(&index.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        let mut p = PairVector::zeros(self.n);
        let pairs = (0..self.n).flat_map(|i| (i + 1..self.n).map(move |j| (i, j)));
        for ((i, j), law) in pairs.zip(&self.laws) {
            let (forward, backward) = match law {
                PairLaw::Dirichlet(gammas) => {
                    let g = gammas.map(|d| d.sample(&mut rng));
                    let total = g[0] + g[1] + g[2];
                    if total > 0.0 {
                        let (mut f, mut b) = (g[0] / total, g[1] / total);
                        while f + b > 1.0 {
                            if f >= b {
                                f = f.next_down();
                            } else {
                                b = b.next_down();
                            }
                        }
                        (f, b)
                    } else {
                        (1.0 / 3.0, 1.0 / 3.0)
                    }
                }
                PairLaw::Beta(beta) => {
                    let f = beta.sample(&mut rng);
                    (f, 1.0 - f)
                }
            };
            p.set(i, j, forward);
            p.set(j, i, backward);
        }
        p
    }

    pub fn iter(&self, range: Range<u64>) -> impl Iterator<Item = PairVector> + '_ {
        range.map(move |k| self.draw(k))
    }
}

/// Prior sampler when `data` is `None`, posterior sampler otherwise.
///
/// With `forced_choice` the indifference cell is dropped and each pair gets a
/// Beta law on `p(i, j)`; data must then carry no indifference counts.
pub fn sample_encompassing(
    n: usize,
    data: Option<&ChoiceData>,
    cfg: &BayesConfig,
    forced_choice: bool,
) -> Result<EncompassingSampler> {
    cfg.validate()?;
    if let Some(d) = data {
        if d.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: d.n(),
            });
        }
        if forced_choice && d.has_indifference() {
            return Err(Error::IncompatibleData(
                "forced-choice sampling admits no indifference responses",
            ));
        }
    }
    let empty = ChoiceData::new(n);
    let counts = data.unwrap_or(&empty);
    let invalid = |_| Error::InvalidConfig("invalid concentration");
    let laws = counts
        .iter()
        .map(|(_, _, c)| {
            let alpha = [
                cfg.prior[0] + c.chose_j as f64,
                cfg.prior[1] + c.chose_i as f64,
                cfg.prior[2] + c.indifferent as f64,
            ];
            if forced_choice {
                Beta::new(alpha[0], alpha[1])
                    .map(PairLaw::Beta)
                    .map_err(|_| Error::InvalidConfig("invalid concentration"))
            } else {
                Ok(PairLaw::Dirichlet([
                    Gamma::new(alpha[0], 1.0).map_err(invalid)?,
                    Gamma::new(alpha[1], 1.0).map_err(invalid)?,
                    Gamma::new(alpha[2], 1.0).map_err(invalid)?,
                ]))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EncompassingSampler {
        n,
        seed: cfg.seed,
        stream: if data.is_some() {
            POSTERIOR_STREAM
        } else {
            PRIOR_STREAM
        },
        laws,
    })
}

/// The prior and posterior samplers used by [`bayes_factor`].
///
/// Without data the posterior is a second, independent prior stream.
pub fn bayes_samplers(
    kind: OrderKind,
    n: usize,
    data: Option<&ChoiceData>,
    cfg: &BayesConfig,
) -> Result<(EncompassingSampler, EncompassingSampler)> {
    let forced = kind == OrderKind::LinearOrder;
    let prior = sample_encompassing(n, None, cfg, forced)?;
    let mut posterior = match data {
        Some(d) => sample_encompassing(n, Some(d), cfg, forced)?,
        None => prior.clone(),
    };
    posterior.stream = POSTERIOR_STREAM;
    Ok((prior, posterior))
}

/// Number of draws in `range` that lie inside the order polytope.
pub fn count_hits(
    net: &Network,
    proj: &ProjectionMap,
    sampler: &EncompassingSampler,
    range: Range<u64>,
    solver: &SolverConfig,
) -> Result<u64> {
    let mut hits = 0;
    for p in sampler.iter(range) {
        if is_member(net, proj, &p, solver)? {
            hits += 1;
        }
    }
    Ok(hits)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BayesReport {
    pub samples: u64,
    pub prior_hits: u64,
    pub posterior_hits: u64,
    pub prior_proportion: f64,
    pub posterior_proportion: f64,
    pub bayes_factor: f64,
    pub mc_stderr: f64,
}

impl BayesReport {
    pub fn from_hits(samples: u64, prior_hits: u64, posterior_hits: u64) -> Result<Self> {
        if prior_hits == 0 {
            return Err(Error::DegeneratePrior {
                posterior_hits,
                samples,
            });
        }
        let total = samples as f64;
        let a = posterior_hits as f64 / total;
        let b = prior_hits as f64 / total;
        let var_a = a * (1.0 - a) / total;
        let var_b = b * (1.0 - b) / total;
        Ok(Self {
            samples,
            prior_hits,
            posterior_hits,
            prior_proportion: b,
            posterior_proportion: a,
            bayes_factor: a / b,
            mc_stderr: sqrt(var_a / (b * b) + a * a * var_b / (b * b * b * b)),
        })
    }
}

/// Encompassing-prior Bayes factor of the order model against the
/// unrestricted model, by counting prior and posterior draws inside the polytope.
pub fn bayes_factor(
    net: &Network,
    proj: &ProjectionMap,
    data: Option<&ChoiceData>,
    cfg: &BayesConfig,
) -> Result<BayesReport> {
    if let Some(d) = data {
        if net.kind() == OrderKind::LinearOrder && d.has_indifference() {
            return Err(Error::IncompatibleData(
                "linear orders admit no indifference responses",
            ));
        }
    }
    let (prior, posterior) = bayes_samplers(net.kind(), net.n(), data, cfg)?;
    let range = 0..cfg.sample_count;
    let prior_hits = count_hits(net, proj, &prior, range.clone(), &cfg.solver)?;
    let posterior_hits = count_hits(net, proj, &posterior, range, &cfg.solver)?;
    BayesReport::from_hits(cfg.sample_count, prior_hits, posterior_hits)
}
