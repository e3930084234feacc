mod common;

use common::graph_from;
use proptest::prelude::*;
use wellspread::graph::diffuse;
use wellspread::transport::{dual_lp_w1, lipschitz_constant, tree_w1_oracle, wasserstein1, TransportResult};
use wellspread::{Graph, VertexFunction};

/// Random labelled tree: vertex `i > 0` hangs off `parents[i - 1] % i`.
fn tree_from(parents: &[usize]) -> Graph {
    let edges: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, &p)| (p % (i + 1), i + 1)).collect();
    Graph::from_edges(parents.len() + 1, &edges).unwrap()
}

/// Probability measure with rational weights `w_i / Σw`.
fn measure(weights: &[u32], n: usize) -> VertexFunction {
    let w: Vec<f64> = (0..n).map(|i| weights[i % weights.len()] as f64).collect();
    let total: f64 = w.iter().sum();
    if total == 0.0 {
        return VertexFunction::uniform(n);
    }
    VertexFunction(w.into_iter().map(|x| x / total).collect())
}

fn assert_certified(g: &Graph, mu: &VertexFunction, nu: &VertexFunction, r: &TransportResult) {
    assert!((r.plan_cost(g) - r.cost).abs() < 1e-9);
    assert!((r.dual_objective(mu, nu) - r.cost).abs() < 1e-7);
    assert!(lipschitz_constant(g, &r.dual) <= 1.0 + 1e-9);
    let mut net = vec![0.0; g.n()];
    for p in &r.plan {
        assert!(p.mass > 0.0);
        net[p.source] += p.mass;
        net[p.target] -= p.mass;
    }
    for x in 0..g.n() {
        assert!((net[x] - (mu[x] - nu[x])).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn flow_matches_tree_oracle(
        parents in prop::collection::vec(0usize..1000, 1..30),
        a in prop::collection::vec(0u32..20, 1..40),
        b in prop::collection::vec(0u32..20, 1..40),
    ) {
        let g = tree_from(&parents);
        let (mu, nu) = (measure(&a, g.n()), measure(&b, g.n()));
        let r = wasserstein1(&g, &mu, &nu).unwrap();
        let oracle = tree_w1_oracle(&g, &mu, &nu).unwrap();
        prop_assert!((r.cost - oracle).abs() < 1e-9, "flow {} vs tree {}", r.cost, oracle);
        assert_certified(&g, &mu, &nu, &r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn flow_matches_dual_lp(
        parents in prop::collection::vec(0usize..1000, 1..25),
        chords in prop::collection::vec((0usize..1000, 0usize..1000), 0..20),
        a in prop::collection::vec(0u32..20, 1..40),
        b in prop::collection::vec(0u32..20, 1..40),
    ) {
        let g = graph_from(&parents, &chords);
        let (mu, nu) = (measure(&a, g.n()), measure(&b, g.n()));
        let r = wasserstein1(&g, &mu, &nu).unwrap();
        let lp = dual_lp_w1(&g, &mu, &nu).unwrap();
        prop_assert!((r.cost - lp.value).abs() < 1e-9, "flow {} vs lp {}", r.cost, lp.value);
        prop_assert!(lipschitz_constant(&g, &lp.potential) <= 1.0 + 1e-9);
        assert_certified(&g, &mu, &nu, &r);
    }

    #[test]
    fn triangle_inequality(
        parents in prop::collection::vec(0usize..1000, 1..20),
        chords in prop::collection::vec((0usize..1000, 0usize..1000), 0..15),
        a in prop::collection::vec(0u32..20, 1..30),
        b in prop::collection::vec(0u32..20, 1..30),
        c in prop::collection::vec(0u32..20, 1..30),
    ) {
        let g = graph_from(&parents, &chords);
        let n = g.n();
        let (x, y, z) = (measure(&a, n), measure(&b, n), measure(&c, n));
        let xy = wasserstein1(&g, &x, &y).unwrap().cost;
        let yz = wasserstein1(&g, &y, &z).unwrap().cost;
        let xz = wasserstein1(&g, &x, &z).unwrap().cost;
        prop_assert!(xz <= xy + yz + 1e-9);
    }

    #[test]
    fn scale_equivariance(
        parents in prop::collection::vec(0usize..1000, 1..25),
        chords in prop::collection::vec((0usize..1000, 0usize..1000), 0..15),
        a in prop::collection::vec(0u32..20, 1..30),
        b in prop::collection::vec(0u32..20, 1..30),
        scale in 0.01f64..100.0,
    ) {
        let g = graph_from(&parents, &chords);
        let (mu, nu) = (measure(&a, g.n()), measure(&b, g.n()));
        let base = wasserstein1(&g, &mu, &nu).unwrap().cost;
        let scaled = wasserstein1(&g, &mu.scaled(scale), &nu.scaled(scale)).unwrap().cost;
        prop_assert!((scaled - scale * base).abs() <= 1e-9 * scale.max(1.0));
    }

    #[test]
    fn one_diffusion_step_costs_at_most_l1(
        parents in prop::collection::vec(0usize..1000, 1..30),
        chords in prop::collection::vec((0usize..1000, 0usize..1000), 0..20),
        raw in prop::collection::vec(-1.0f64..1.0, 1..40),
    ) {
        let g = graph_from(&parents, &chords);
        let n = g.n();
        let mut v = VertexFunction((0..n).map(|i| raw[i % raw.len()]).collect());
        let mean = v.mean();
        v.iter_mut().for_each(|x| *x -= mean);
        let step = diffuse(&g, &v);
        let w = wasserstein1(&g, &step, &v).unwrap().cost;
        prop_assert!(w <= v.l1_norm() + 1e-9, "{} > {}", w, v.l1_norm());
    }
}
