#![allow(dead_code)]

use proptest::prelude::*;
use wellspread::Graph;

/// Random tree on `parents.len() + 1` vertices plus chords; always connected.
pub fn graph_from(parents: &[usize], chords: &[(usize, usize)]) -> Graph {
    let n = parents.len() + 1;
    let mut edges: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, &p)| (p % (i + 1), i + 1)).collect();
    for &(a, b) in chords {
        let (u, v) = (a % n, b % n);
        let key = (u.min(v), u.max(v));
        if u != v && !edges.iter().any(|&(x, y)| (x.min(y), x.max(y)) == key) {
            edges.push(key);
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// Connected graphs with 2..=max_n vertices.
pub fn connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (
        prop::collection::vec(0usize..1000, 1..max_n),
        prop::collection::vec((0usize..1000, 0usize..1000), 0..2 * max_n),
    )
        .prop_map(|(p, c)| graph_from(&p, &c))
}

/// Regular graphs drawn from the parametric families.
pub fn regular_graph() -> impl Strategy<Value = Graph> {
    prop_oneof![
        (3usize..30).prop_map(wellspread::graph::cycle),
        (2usize..12).prop_map(wellspread::graph::complete),
        (3usize..6, 3usize..6).prop_map(|(m, n)| wellspread::graph::torus_grid(m, n)),
        Just(wellspread::graph::frucht()),
        Just(wellspread::graph::truncated_tetrahedral()),
        Just(wellspread::graph::nauru()),
    ]
}
