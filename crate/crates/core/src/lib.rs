//! Network-flow extended formulations of the linear, weak, interval and
//! semiorder polytopes.
//!
//! Each order kind gets an acyclic network whose source–sink paths encode the
//! orders of that kind; the flow polytope of the network projects onto the
//! order polytope through a sparse 0/1 map. On top of that the crate solves
//! maximum-likelihood fitting of random-preference models and polytope
//! membership with an away-step Frank–Wolfe method whose linear oracle is a
//! shortest path in the network.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, parallel
//! sampling and the command-line tool live in the `orderflow` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod bits;
pub mod error;
pub mod flow;
mod math;
pub mod network;
pub mod optim;
pub mod pair;
pub mod projection;
pub mod relation;
pub mod stats;

pub use error::{Error, Result};
pub use flow::{
    canonical_description, decode_path, decoded_orders, enumerate_paths, enumerate_paths_with_cap,
    for_each_path, is_flow, path_count, path_of_order, path_to_flow, shortest_path_lmo,
    CanonicalDescription, FlowVector, LinearRow, PathRef, CONSERVATION_TOLERANCE, DEFAULT_PATH_CAP,
};
pub use network::{
    build_network, build_network_with, count_arcs_formula, count_nodes_formula,
    semiorder_fifo_arc_count, word_decode_arc, word_encode_arc, Arc, Network, NetworkCaps, NodeKey,
};
pub use optim::{
    fit_mle, is_member, membership_distance, minimize_over_flow_polytope, Atom, LineSearch,
    Membership, MleFit, Objective, SolveResult, SolverConfig, SquaredDistance, Termination,
};
pub use pair::{pair_at, pair_count, pair_index, pairs, PairVector};
pub use projection::{build_projection, ProjectionMap};
pub use relation::{
    characteristic_vector, enumerate_orders, enumerate_orders_with, interval_representation,
    is_order, weak_order_utility, EnumerationCaps, IntervalRepresentation, OrderKind, Relation,
    MAX_ALTERNATIVES,
};
pub use stats::{
    bayes_factor, bayes_samplers, count_hits, log_likelihood, log_likelihood_gradient,
    sample_encompassing, BayesConfig, BayesReport, ChoiceData, EncompassingSampler,
    NegLogLikelihood, PairCounts,
};
