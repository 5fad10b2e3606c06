mod common;

use std::collections::BTreeSet;

use common::{matrix_of, oracle_orders, oracle_vector};
use orderflow_core::{
    build_network, build_projection, canonical_description, decode_path, decoded_orders,
    enumerate_orders, enumerate_paths, is_flow, path_of_order, path_to_flow, shortest_path_lmo,
    FlowVector, Network, OrderKind, PairVector, PathRef,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn path_cost(p: &PathRef, cost: &[f64]) -> f64 {
    p.arcs().iter().map(|&a| cost[a]).sum()
}

#[test]
fn decoding_covers_exactly_the_orders() {
    for kind in OrderKind::ALL {
        for n in 1..=4 {
            let net = build_network(n, kind).unwrap();
            let paths = enumerate_paths(&net).unwrap();
            let decoded: BTreeSet<_> = paths
                .iter()
                .map(|p| decode_path(&net, p).unwrap())
                .collect();
            assert_eq!(decoded, oracle_orders(n, kind), "{kind} n={n}");
            assert_eq!(decoded, decoded_orders(&net));
            let bijective = matches!(kind, OrderKind::LinearOrder | OrderKind::WeakOrder);
            assert_eq!(
                decoded.len() == paths.len(),
                bijective || n == 1,
                "{kind} n={n}"
            );
        }
    }
}

#[test]
fn vertex_images_are_order_vectors() {
    let mut cases: Vec<(OrderKind, usize)> = OrderKind::ALL
        .iter()
        .flat_map(|&k| (1..=4).map(move |n| (k, n)))
        .collect();
    cases.extend([(OrderKind::LinearOrder, 5), (OrderKind::WeakOrder, 5)]);
    for (kind, n) in cases {
        let net = build_network(n, kind).unwrap();
        let proj = build_projection(&net);
        let images: BTreeSet<Vec<u8>> = enumerate_paths(&net)
            .unwrap()
            .iter()
            .map(|p| {
                let x = proj.apply(&path_to_flow(&net, p).unwrap()).unwrap();
                x.values().iter().map(|&v| v as u8).collect()
            })
            .collect();
        let expected: BTreeSet<Vec<u8>> = oracle_orders(n, kind)
            .iter()
            .map(|r| oracle_vector(&matrix_of(r)))
            .collect();
        assert_eq!(images, expected, "{kind} n={n}");
    }
}

#[test]
fn every_order_has_a_path() {
    for kind in OrderKind::ALL {
        for n in 1..=5 {
            let net = build_network(n, kind).unwrap();
            for r in enumerate_orders(n, kind).unwrap() {
                let p = path_of_order(&net, &r).unwrap();
                assert_eq!(decode_path(&net, &p).unwrap(), r);
            }
        }
    }
}

fn brute_force_minimum(paths: &[PathRef], cost: &[f64]) -> (f64, PathRef) {
    let best = paths
        .iter()
        .map(|p| path_cost(p, cost))
        .fold(f64::INFINITY, f64::min);
    let first = paths
        .iter()
        .filter(|p| path_cost(p, cost) == best)
        .min_by(|a, b| a.arcs().cmp(b.arcs()))
        .unwrap()
        .clone();
    (best, first)
}

#[test]
fn lmo_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for kind in OrderKind::ALL {
        for n in 1..=4 {
            let net = build_network(n, kind).unwrap();
            let paths = enumerate_paths(&net).unwrap();
            for trial in 0..100 {
                let cost: Vec<f64> = (0..net.arc_count())
                    .map(|_| {
                        if trial % 2 == 0 {
                            rng.random_range(-1.0..1.0)
                        } else {
                            rng.random_range(-3i32..=3) as f64
                        }
                    })
                    .collect();
                let lmo = shortest_path_lmo(&net, &cost);
                let (best, first) = brute_force_minimum(&paths, &cost);
                if trial % 2 == 0 {
                    assert!((path_cost(&lmo, &cost) - best).abs() <= 1e-12);
                } else {
                    // Integer costs are exact, so ties must resolve to the
                    // lexicographically first optimal path.
                    assert_eq!(path_cost(&lmo, &cost), best);
                    assert_eq!(lmo, first, "{kind} n={n}");
                }
            }
        }
    }
}

#[test]
fn description_size_is_arc_count() {
    for kind in OrderKind::ALL {
        for n in 1..=5 {
            let net = build_network(n, kind).unwrap();
            let desc = canonical_description(&net);
            assert_eq!(desc.size(), net.arc_count());
            assert_eq!(desc.variable_count(), net.arc_count());
            assert_eq!(desc.equalities.len(), net.node_count() - 1);
            assert!(desc.equalities.iter().all(|row| row.node != net.sink()));
            let sources: Vec<_> = desc.equalities.iter().filter(|r| r.rhs == 1.0).collect();
            assert_eq!(sources.len(), 1);
            assert_eq!(sources[0].name, "source_value");
        }
    }
}

fn random_mixture(
    net: &Network,
    paths: &[PathRef],
    rng: &mut ChaCha8Rng,
    terms: usize,
) -> FlowVector {
    let weights: Vec<f64> = (0..terms).map(|_| rng.random_range(0.0..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut flow = FlowVector::zeros(net.arc_count());
    for w in weights {
        let p = &paths[rng.random_range(0..paths.len())];
        for &a in p.arcs() {
            flow.values_mut()[a] += w / total;
        }
    }
    flow
}

#[test]
fn mixtures_are_unit_flows_with_images_in_the_cube() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for kind in OrderKind::ALL {
        for n in 1..=4 {
            let net = build_network(n, kind).unwrap();
            let proj = build_projection(&net);
            let desc = canonical_description(&net);
            let paths = enumerate_paths(&net).unwrap();
            for _ in 0..50 {
                let flow = random_mixture(&net, &paths, &mut rng, 5);
                assert!(is_flow(&net, &flow, 1.0));
                assert!(desc.is_satisfied(&flow, 1e-9));
                let x = proj.apply(&flow).unwrap();
                assert!(x
                    .values()
                    .iter()
                    .all(|&v| (-1e-12..=1.0 + 1e-12).contains(&v)));
            }
        }
    }
}

#[test]
fn broken_flows_are_rejected() {
    let net = build_network(3, OrderKind::WeakOrder).unwrap();
    let paths = enumerate_paths(&net).unwrap();
    let mut flow = path_to_flow(&net, &paths[0]).unwrap();
    assert!(!is_flow(&net, &flow, 0.5));
    flow.values_mut()[paths[0].arcs()[0]] = 0.5;
    assert!(!is_flow(&net, &flow, 1.0));
    assert!(!canonical_description(&net).is_satisfied(&flow, 1e-9));
}

fn setup_strategy() -> impl Strategy<Value = (OrderKind, usize, u64)> {
    (0usize..4, 1usize..=5, any::<u64>()).prop_map(|(k, n, seed)| (OrderKind::ALL[k], n, seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn adjoint_satisfies_bilinear_identity((kind, n, seed) in setup_strategy()) {
        let net = build_network(n, kind).unwrap();
        let proj = build_projection(&net);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let flow = FlowVector::new((0..net.arc_count()).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap();
        let g = PairVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        let left = proj.apply(&flow).unwrap().dot(&g);
        let right: f64 = proj.apply_adjoint(&g).unwrap().iter().zip(flow.values()).map(|(c, f)| c * f).sum();
        prop_assert!((left - right).abs() <= 1e-12 * (1.0 + left.abs()));
    }

    #[test]
    fn projection_is_linear((kind, n, seed) in setup_strategy(), alpha in -2.0f64..2.0, beta in -2.0f64..2.0) {
        let net = build_network(n, kind).unwrap();
        let proj = build_projection(&net);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f1: Vec<f64> = (0..net.arc_count()).map(|_| rng.random_range(0.0..1.0)).collect();
        let f2: Vec<f64> = (0..net.arc_count()).map(|_| rng.random_range(0.0..1.0)).collect();
        let combined: Vec<f64> = f1.iter().zip(&f2).map(|(a, b)| alpha * a + beta * b).collect();
        let lhs = proj.apply_slice(&combined).unwrap();
        let (x1, x2) = (proj.apply_slice(&f1).unwrap(), proj.apply_slice(&f2).unwrap());
        for k in 0..lhs.dim() {
            let rhs = alpha * x1.values()[k] + beta * x2.values()[k];
            prop_assert!((lhs.values()[k] - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
        }
    }
}
