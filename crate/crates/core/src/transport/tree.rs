use crate::function::{neumaier_sum, VertexFunction};
use crate::graph::Graph;

use super::{check_pair, TransportError};

/// Closed-form W1 on a tree: the sum over edges of the absolute net mass
/// `mu - nu` in the subtree hanging below that edge.
pub fn tree_w1_oracle(g: &Graph, mu: &VertexFunction, nu: &VertexFunction) -> Result<f64, TransportError> {
    if !g.is_tree() {
        return Err(TransportError::NotATree { n: g.n(), edges: g.edge_count() });
    }
    check_pair(g, mu, nu)?;
    let n = g.n();
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    seen[0] = true;
    order.push(0);
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        head += 1;
        for &y in g.neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                parent[y] = x;
                order.push(y);
            }
        }
    }
    let mut net: Vec<f64> = mu.iter().zip(nu.iter()).map(|(a, b)| a - b).collect();
    let mut crossing = Vec::with_capacity(n - 1);
    for &x in order.iter().skip(1).rev() {
        crossing.push(net[x].abs());
        net[parent[x]] += net[x];
    }
    Ok(neumaier_sum(crossing))
}
