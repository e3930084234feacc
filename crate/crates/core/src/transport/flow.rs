//! Uncapacitated unit-cost min-cost flow on the edges of a graph, solved by
//! successive shortest paths with integer node potentials.
//!
//! Every edge carries a signed net flow. Residual arcs are: `x → y` at cost
//! `-1` while there is flow `y → x` to cancel, and at cost `+1` otherwise.
//! Potentials stay integral, so reduced costs are always in `{0, 1, 2}` and
//! the Dijkstra runs are exact.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::graph::Graph;

use super::TransportError;

pub(crate) struct FlowSolution {
    /// `(u, v)` with `u < v`, aligned with `flow`.
    pub edges: Vec<(usize, usize)>,
    /// Net flow per edge; positive means `u → v`.
    pub flow: Vec<f64>,
    /// Node potentials; `-potential` is an optimal 1-Lipschitz dual.
    pub potential: Vec<i64>,
}

struct Incidence {
    nbr: usize,
    edge: usize,
    /// `+1.0` if this vertex is the edge's `u`.
    orient: f64,
}

/// Routes `supply` (positive = excess, negative = demand) at minimum total
/// `Σ |flow|`. Entries smaller than `eps` in magnitude are treated as zero.
pub(crate) fn min_cost_flow(g: &Graph, supply: &[f64], eps: f64) -> Result<FlowSolution, TransportError> {
    let n = g.n();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut incidence: Vec<Vec<Incidence>> = (0..n).map(|_| Vec::new()).collect();
    for (e, &(u, v)) in edges.iter().enumerate() {
        incidence[u].push(Incidence { nbr: v, edge: e, orient: 1.0 });
        incidence[v].push(Incidence { nbr: u, edge: e, orient: -1.0 });
    }

    let mut excess: Vec<f64> = supply.iter().map(|&s| if s.abs() <= eps { 0.0 } else { s }).collect();
    let mut flow = vec![0.0; edges.len()];
    let mut potential = vec![0i64; n];

    let mut dist = vec![i64::MAX; n];
    let mut hops = vec![0usize; n];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut settled = vec![false; n];
    let mut touched: Vec<usize> = Vec::with_capacity(n);
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut heap = BinaryHeap::new();

    let max_iterations = 64 * (n + edges.len()) * (n + 1) + 1024;
    let mut iterations = 0;
    loop {
        let has_excess = excess.iter().any(|&x| x > eps);
        let has_deficit = excess.iter().any(|&x| x < -eps);
        if !has_excess || !has_deficit {
            break;
        }
        iterations += 1;
        if iterations > max_iterations {
            return Err(TransportError::Numerical(format!(
                "min-cost flow exceeded {max_iterations} augmentations"
            )));
        }

        for &v in &touched {
            dist[v] = i64::MAX;
            hops[v] = 0;
            parent[v] = None;
            settled[v] = false;
        }
        touched.clear();
        order.clear();
        heap.clear();
        for v in 0..n {
            if excess[v] > eps {
                dist[v] = 0;
                touched.push(v);
                heap.push(Reverse((0i64, 0usize, v)));
            }
        }

        let mut target = None;
        while let Some(Reverse((d, h, x))) = heap.pop() {
            if settled[x] || d != dist[x] || h != hops[x] {
                continue;
            }
            settled[x] = true;
            order.push(x);
            if excess[x] < -eps {
                target = Some(x);
                break;
            }
            for inc in &incidence[x] {
                let y = inc.nbr;
                if settled[y] {
                    continue;
                }
                let outward = inc.orient * flow[inc.edge];
                let cost = if outward < -eps { -1 } else { 1 };
                let reduced = cost + potential[x] - potential[y];
                debug_assert!(reduced >= 0, "negative reduced cost {reduced}");
                let nd = d + reduced;
                let nh = h + 1;
                if nd < dist[y] || (nd == dist[y] && nh < hops[y]) {
                    if dist[y] == i64::MAX {
                        touched.push(y);
                    }
                    dist[y] = nd;
                    hops[y] = nh;
                    parent[y] = Some((x, inc.edge));
                    heap.push(Reverse((nd, nh, y)));
                }
            }
        }
        let Some(t) = target else {
            return Err(TransportError::Numerical("no augmenting path to a deficit vertex".into()));
        };

        let reach = dist[t];
        for &v in &order {
            potential[v] += dist[v] - reach;
        }

        // Walk back to the source, collecting the bottleneck.
        let mut delta = -excess[t];
        let mut v = t;
        let mut steps = 0;
        while let Some((x, e)) = parent[v] {
            let orient = if edges[e].0 == x { 1.0 } else { -1.0 };
            let outward = orient * flow[e];
            if outward < -eps {
                delta = delta.min(-outward);
            }
            v = x;
            steps += 1;
            if steps > n {
                return Err(TransportError::Numerical("cycle in shortest-path tree".into()));
            }
        }
        let s = v;
        delta = delta.min(excess[s]);

        let mut v = t;
        while let Some((x, e)) = parent[v] {
            let orient = if edges[e].0 == x { 1.0 } else { -1.0 };
            flow[e] += orient * delta;
            if flow[e].abs() <= eps {
                flow[e] = 0.0;
            }
            v = x;
        }
        excess[s] -= delta;
        excess[t] += delta;
        for x in [s, t] {
            if excess[x].abs() <= eps {
                excess[x] = 0.0;
            }
        }
    }

    Ok(FlowSolution { edges, flow, potential })
}

/// Splits an acyclic edge flow into source→sink masses.
///
/// Returns `(source, sink, mass)` triples sorted by `(source, sink)`.
pub(crate) fn decompose_paths(
    g: &Graph,
    solution: &FlowSolution,
    supply: &[f64],
    eps: f64,
) -> Result<Vec<(usize, usize, f64)>, TransportError> {
    let n = g.n();
    // Outgoing positive arcs per vertex: (head, edge).
    let mut out: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut remaining = vec![0.0; solution.edges.len()];
    for (e, (&(u, v), &f)) in solution.edges.iter().zip(&solution.flow).enumerate() {
        if f > eps {
            out[u].push((v, e));
            remaining[e] = f;
        } else if f < -eps {
            out[v].push((u, e));
            remaining[e] = -f;
        }
    }
    let mut left: Vec<f64> = supply.to_vec();
    let mut pairs = std::collections::BTreeMap::<(usize, usize), f64>::new();
    let mut path = Vec::new();
    for s in 0..n {
        let mut guard = 0;
        while left[s] > eps {
            guard += 1;
            if guard > 4 * (n + solution.edges.len()) + 16 {
                return Err(TransportError::Numerical("flow decomposition did not terminate".into()));
            }
            path.clear();
            let mut v = s;
            let mut amount = left[s];
            while left[v] >= -eps {
                let Some(&(w, e)) = out[v].iter().find(|&&(_, e)| remaining[e] > eps) else {
                    break;
                };
                amount = amount.min(remaining[e]);
                path.push(e);
                v = w;
                if path.len() > n {
                    return Err(TransportError::Numerical("cyclic flow in decomposition".into()));
                }
            }
            if left[v] >= -eps {
                // Leftover mass that the flow never carried (within tolerance).
                if left[s] <= 1e3 * eps {
                    left[s] = 0.0;
                    break;
                }
                return Err(TransportError::Numerical(format!(
                    "flow from vertex {s} ends at {v} without demand"
                )));
            }
            amount = amount.min(-left[v]);
            for &e in &path {
                remaining[e] -= amount;
            }
            left[s] -= amount;
            left[v] += amount;
            *pairs.entry((s, v)).or_insert(0.0) += amount;
        }
    }
    Ok(pairs.into_iter().map(|((s, t), m)| (s, t, m)).collect())
}
