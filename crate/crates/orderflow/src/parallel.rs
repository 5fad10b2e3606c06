//! Bayes factors with the membership solves spread over threads.

use orderflow_core::{
    bayes_samplers, count_hits, BayesConfig, BayesReport, ChoiceData, EncompassingSampler, Error,
    Network, OrderKind, ProjectionMap, Result, SolverConfig,
};
use rayon::prelude::*;

const CHUNK: u64 = 256;

fn parallel_hits(
    net: &Network,
    proj: &ProjectionMap,
    sampler: &EncompassingSampler,
    samples: u64,
    solver: &SolverConfig,
) -> Result<u64> {
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let range = c * CHUNK..((c + 1) * CHUNK).min(samples);
            count_hits(net, proj, sampler, range, solver)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

/// Same result as [`orderflow_core::bayes_factor`] for every thread count,
/// since each draw is seeded by its own index.
pub fn bayes_factor_parallel(
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
    let prior_hits = parallel_hits(net, proj, &prior, cfg.sample_count, &cfg.solver)?;
    let posterior_hits = parallel_hits(net, proj, &posterior, cfg.sample_count, &cfg.solver)?;
    BayesReport::from_hits(cfg.sample_count, prior_hits, posterior_hits)
}
