//! Convex minimization over the projected flow polytope.
//!
//! The solver is away-step Frank–Wolfe. Iterates live in pair space as an
//! explicit convex combination of projected path vertices; the linear
//! oracle pulls the gradient back to arc costs and asks for a shortest path.
//! The same weights applied to the path indicator vectors give the
//! optimal flow.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::flow::{shortest_path_lmo, FlowVector, PathRef};
use crate::math::{dot, sqrt};
use crate::network::Network;
use crate::pair::{pair_count, PairVector};
use crate::projection::ProjectionMap;
use crate::relation::OrderKind;
use crate::stats::{log_likelihood, ChoiceData, NegLogLikelihood};

/// A differentiable convex function of the pair-space point.
pub trait Objective {
    /// May return `+inf` outside the function's domain.
    fn value(&self, p: &[f64]) -> f64;

    fn gradient(&self, p: &[f64], out: &mut [f64]);

    /// Quadratic objectives get a closed-form exact line search.
    fn is_quadratic(&self) -> bool {
        false
    }
}

impl<T: Objective + ?Sized> Objective for &T {
    fn value(&self, p: &[f64]) -> f64 {
        (**self).value(p)
    }

    fn gradient(&self, p: &[f64], out: &mut [f64]) {
        (**self).gradient(p, out)
    }

    fn is_quadratic(&self) -> bool {
        (**self).is_quadratic()
    }
}

/// `‖p - target‖²`.
#[derive(Clone, Debug, PartialEq)]
pub struct SquaredDistance {
    target: Vec<f64>,
}

impl SquaredDistance {
    pub fn new(target: &PairVector) -> Self {
        Self {
            target: target.values().to_vec(),
        }
    }
}

impl Objective for SquaredDistance {
    fn value(&self, p: &[f64]) -> f64 {
        p.iter()
            .zip(&self.target)
            .map(|(a, b)| (a - b) * (a - b))
            .fold(0.0, |acc, v| acc + v)
    }

    fn gradient(&self, p: &[f64], out: &mut [f64]) {
        for ((o, a), b) in out.iter_mut().zip(p).zip(&self.target) {
            *o = 2.0 * (a - b);
        }
    }

    fn is_quadratic(&self) -> bool {
        true
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LineSearch {
    /// Closed form for quadratics; otherwise bisection on the directional
    /// derivative, which is monotone for convex objectives.
    Exact,
    /// Start at the largest feasible step and shrink until the Armijo
    /// condition holds.
    Backtracking { shrink: f64, armijo: f64 },
}

impl LineSearch {
    pub const ARMIJO: LineSearch = LineSearch::Backtracking {
        shrink: 0.5,
        armijo: 1e-4,
    };
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub max_iterations: usize,
    pub duality_gap_tolerance: f64,
    /// Euclidean distance below which a point counts as inside.
    pub membership_tolerance: f64,
    pub line_search: LineSearch,
    /// Probabilities are clamped to at least this before logs and reciprocals.
    pub domain_guard: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iterations: 50_000,
            duality_gap_tolerance: 1e-8,
            membership_tolerance: 1e-6,
            line_search: LineSearch::Exact,
            domain_guard: 1e-12,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be at least 1"));
        }
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.duality_gap_tolerance)
            || !positive(self.membership_tolerance)
            || !positive(self.domain_guard)
        {
            return Err(Error::InvalidConfig(
                "tolerances must be positive and finite",
            ));
        }
        if let LineSearch::Backtracking { shrink, armijo } = self.line_search {
            if !(shrink > 0.0 && shrink < 1.0 && armijo > 0.0 && armijo < 1.0) {
                return Err(Error::InvalidConfig(
                    "backtracking constants must lie in (0, 1)",
                ));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// Frank–Wolfe gap at or below the tolerance.
    Converged,
    /// The iteration budget ran out first.
    MaxIterations,
    /// Membership was decided before the gap reached the tolerance.
    MembershipDecided,
}

/// One vertex of the maintained convex decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub path: PathRef,
    pub vertex: PairVector,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    pub flow: FlowVector,
    pub point: PairVector,
    pub objective: f64,
    /// Frank–Wolfe gap at the returned point.
    pub gap: f64,
    /// Smallest gap seen over all iterations.
    pub best_gap: f64,
    /// Gap at every iterate, in order.
    pub gaps: Vec<f64>,
    pub iterations: usize,
    pub termination: Termination,
    pub active: Vec<Atom>,
}

impl SolveResult {
    pub fn converged(&self) -> bool {
        self.termination != Termination::MaxIterations
    }
}

#[derive(Clone, Copy, Debug)]
enum StopRule {
    Gap,
    /// Stop once inside is certified (`f <= eps²`) or, with `early`, once
    /// outside is certified by the gap lower bound (`f - gap > eps²`).
    Membership {
        eps_sq: f64,
        early: bool,
    },
}

/// Minimizes `objective(π(Φ))` over the flow polytope.
pub fn minimize_over_flow_polytope<O: Objective>(
    net: &Network,
    proj: &ProjectionMap,
    objective: &O,
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    solve(net, proj, objective, cfg, StopRule::Gap)
}

fn check_dims(net: &Network, proj: &ProjectionMap) -> Result<()> {
    if proj.arc_count() != net.arc_count() || proj.n() != net.n() {
        return Err(Error::DimensionMismatch {
            expected: net.arc_count(),
            found: proj.arc_count(),
        });
    }
    Ok(())
}

fn solve<O: Objective>(
    net: &Network,
    proj: &ProjectionMap,
    objective: &O,
    cfg: &SolverConfig,
    rule: StopRule,
) -> Result<SolveResult> {
    cfg.validate()?;
    check_dims(net, proj)?;
    let dim = pair_count(net.n());
    let mut cost = vec![0.0; net.arc_count()];
    let first = shortest_path_lmo(net, &cost);
    let mut atoms = vec![Atom {
        vertex: proj.apply_path(&first),
        path: first,
        weight: 1.0,
    }];
    let mut p = atoms[0].vertex.values().to_vec();
    let mut grad = vec![0.0; dim];
    let mut scratch = vec![0.0; dim];
    let mut direction = vec![0.0; dim];
    let mut best_gap = f64::INFINITY;
    let mut gaps = Vec::new();
    let mut iteration = 0;

    let (value, gap, termination) = loop {
        let value = objective.value(&p);
        objective.gradient(&p, &mut grad);
        if !value.is_finite() || grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::NonFiniteObjective { iteration });
        }
        proj.adjoint_into(&grad, &mut cost);
        let fw_path = shortest_path_lmo(net, &cost);
        let fw_vertex = proj.apply_path(&fw_path);
        let g_dot_p = dot(&grad, &p);
        let gap = (g_dot_p - dot(&grad, fw_vertex.values())).max(0.0);
        best_gap = best_gap.min(gap);
        gaps.push(gap);

        let stop = match rule {
            StopRule::Gap => (gap <= cfg.duality_gap_tolerance).then_some(Termination::Converged),
            StopRule::Membership { eps_sq, early } => {
                let certified_outside = value - gap > eps_sq;
                if value <= eps_sq {
                    Some(Termination::MembershipDecided)
                } else if gap <= cfg.duality_gap_tolerance && certified_outside {
                    Some(Termination::Converged)
                } else if early && certified_outside {
                    Some(Termination::MembershipDecided)
                } else {
                    None
                }
            }
        };
        if let Some(t) = stop {
            break (value, gap, t);
        }
        if iteration >= cfg.max_iterations {
            break (value, gap, Termination::MaxIterations);
        }
        iteration += 1;

        let (away, away_score) = atoms
            .iter()
            .enumerate()
            .map(|(k, a)| (k, dot(&grad, a.vertex.values())))
            .fold((0, f64::NEG_INFINITY), |best, cur| {
                if cur.1 > best.1 {
                    cur
                } else {
                    best
                }
            });
        let away_gap = away_score - g_dot_p;
        let toward = gap >= away_gap;
        let max_step = if toward {
            for ((d, v), x) in direction.iter_mut().zip(fw_vertex.values()).zip(&p) {
                *d = v - x;
            }
            1.0
        } else {
            for ((d, x), v) in direction
                .iter_mut()
                .zip(&p)
                .zip(atoms[away].vertex.values())
            {
                *d = x - v;
            }
            let w = atoms[away].weight;
            w / (1.0 - w)
        };
        let slope = dot(&grad, &direction);
        if !(slope < 0.0) {
            // No descent direction left at working precision.
            break (value, gap, Termination::Converged);
        }
        let step = line_search(
            objective,
            cfg.line_search,
            &p,
            &direction,
            max_step,
            value,
            slope,
            &mut scratch,
        );
        if step <= 0.0 {
            break (value, gap, Termination::Converged);
        }

        if toward {
            if step >= 1.0 {
                atoms.clear();
                atoms.push(Atom {
                    path: fw_path,
                    vertex: fw_vertex,
                    weight: 1.0,
                });
            } else {
                for a in atoms.iter_mut() {
                    a.weight *= 1.0 - step;
                }
                match atoms.iter_mut().find(|a| a.path == fw_path) {
                    Some(a) => a.weight += step,
                    None => atoms.push(Atom {
                        path: fw_path,
                        vertex: fw_vertex,
                        weight: step,
                    }),
                }
            }
        } else {
            for a in atoms.iter_mut() {
                a.weight *= 1.0 + step;
            }
            if step >= max_step {
                atoms.swap_remove(away);
            } else {
                atoms[away].weight -= step;
            }
        }
        atoms.retain(|a| a.weight > 0.0);
        let total: f64 = atoms.iter().map(|a| a.weight).sum();
        for a in atoms.iter_mut() {
            a.weight /= total;
        }
        recompose(&atoms, &mut p);
    };

    let mut flow = FlowVector::zeros(net.arc_count());
    for atom in &atoms {
        for &a in atom.path.arcs() {
            flow.values_mut()[a] += atom.weight;
        }
    }
    Ok(SolveResult {
        flow,
        point: PairVector::from_values(net.n(), p)?,
        objective: value,
        gap,
        best_gap,
        gaps,
        iterations: iteration,
        termination,
        active: atoms,
    })
}

fn recompose(atoms: &[Atom], p: &mut [f64]) {
    p.iter_mut().for_each(|x| *x = 0.0);
    for atom in atoms {
        for (x, v) in p.iter_mut().zip(atom.vertex.values()) {
            *x += atom.weight * v;
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn line_search<O: Objective>(
    objective: &O,
    rule: LineSearch,
    p: &[f64],
    d: &[f64],
    max_step: f64,
    value: f64,
    slope: f64,
    scratch: &mut [f64],
) -> f64 {
    let mut grad_at = |step: f64, point: &mut Vec<f64>| {
        for ((q, x), dx) in point.iter_mut().zip(p).zip(d) {
            *q = x + step * dx;
        }
        objective.gradient(point, scratch);
        dot(scratch, d)
    };
    let mut point = vec![0.0; p.len()];
    match rule {
        LineSearch::Exact if objective.is_quadratic() => {
            let curvature = grad_at(1.0, &mut point) - slope;
            if curvature <= 0.0 {
                max_step
            } else {
                (-slope / curvature).clamp(0.0, max_step)
            }
        }
        LineSearch::Exact => {
            if grad_at(max_step, &mut point) <= 0.0 {
                return max_step;
            }
            let (mut lo, mut hi) = (0.0, max_step);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if grad_at(mid, &mut point) <= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        }
        LineSearch::Backtracking { shrink, armijo } => {
            let mut step = max_step;
            loop {
                for ((q, x), dx) in point.iter_mut().zip(p).zip(d) {
                    *q = x + step * dx;
                }
                let trial = objective.value(&point);
                if trial <= value + armijo * step * slope {
                    return step;
                }
                step *= shrink;
                if step < 1e-20 * max_step {
                    return 0.0;
                }
            }
        }
    }
}

/// Outcome of a nearest-point solve.
#[derive(Clone, Debug, PartialEq)]
pub struct Membership {
    pub distance: f64,
    pub nearest: PairVector,
    pub inside: bool,
    pub result: SolveResult,
}

fn check_target(net: &Network, target: &PairVector) -> Result<()> {
    if target.n() != net.n() || target.dim() != pair_count(net.n()) {
        return Err(Error::DimensionMismatch {
            expected: pair_count(net.n()),
            found: target.dim(),
        });
    }
    if !target.is_finite() {
        return Err(Error::InvalidConfig("target point must be finite"));
    }
    Ok(())
}

/// Euclidean distance from `target` to the order polytope.
///
/// Runs until inside is certified (`distance <= ε`) or the gap is within
/// tolerance with outside certified by the gap bound.
pub fn membership_distance(
    net: &Network,
    proj: &ProjectionMap,
    target: &PairVector,
    cfg: &SolverConfig,
) -> Result<Membership> {
    membership(net, proj, target, cfg, false)
}

/// Inside/outside classification only; stops as soon as either side is certified.
pub fn is_member(
    net: &Network,
    proj: &ProjectionMap,
    target: &PairVector,
    cfg: &SolverConfig,
) -> Result<bool> {
    Ok(membership(net, proj, target, cfg, true)?.inside)
}

fn membership(
    net: &Network,
    proj: &ProjectionMap,
    target: &PairVector,
    cfg: &SolverConfig,
    early: bool,
) -> Result<Membership> {
    check_target(net, target)?;
    let mut cfg = *cfg;
    cfg.line_search = LineSearch::Exact;
    let eps = cfg.membership_tolerance;
    let objective = SquaredDistance::new(target);
    let result = solve(
        net,
        proj,
        &objective,
        &cfg,
        StopRule::Membership {
            eps_sq: eps * eps,
            early,
        },
    )?;
    let distance = sqrt(result.objective.max(0.0));
    Ok(Membership {
        distance,
        nearest: result.point.clone(),
        inside: distance <= eps,
        result,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MleFit {
    pub result: SolveResult,
    /// Unguarded log-likelihood at the fitted point.
    pub log_likelihood: f64,
}

/// Maximum-likelihood choice probabilities within the order polytope.
pub fn fit_mle(
    net: &Network,
    proj: &ProjectionMap,
    data: &ChoiceData,
    cfg: &SolverConfig,
) -> Result<MleFit> {
    if data.n() != net.n() {
        return Err(Error::DimensionMismatch {
            expected: net.n(),
            found: data.n(),
        });
    }
    if net.kind() == OrderKind::LinearOrder && data.has_indifference() {
        return Err(Error::IncompatibleData(
            "linear orders admit no indifference responses",
        ));
    }
    let objective = NegLogLikelihood::new(data, cfg.domain_guard);
    let result = solve(net, proj, &objective, cfg, StopRule::Gap)?;
    let log_likelihood = log_likelihood(data, &result.point)?;
    Ok(MleFit {
        result,
        log_likelihood,
    })
}
