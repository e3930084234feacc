//! Independent W1 check through the Kantorovich–Rubinstein dual, solved as a
//! dense linear program. Only meant for small graphs (the tableau has
//! `2m` rows and `n + 2m` columns).

use crate::function::VertexFunction;
use crate::graph::Graph;

use super::{check_pair, TransportError};

/// Largest vertex count accepted by [`dual_lp_w1`].
pub const DUAL_LP_MAX_N: usize = 60;

const PIVOT_TOL: f64 = 1e-11;

/// Result of the dual linear program.
#[derive(Debug, Clone)]
pub struct DualLpSolution {
    pub value: f64,
    /// An optimal 1-Lipschitz function, shifted so its minimum is 0.
    pub potential: VertexFunction,
    pub pivots: usize,
}

/// Maximizes `Σ f (mu - nu)` over functions with `|f(u) - f(v)| ≤ 1` on every
/// edge. Uses a dense tableau simplex with Bland's rule.
pub fn dual_lp_w1(g: &Graph, mu: &VertexFunction, nu: &VertexFunction) -> Result<DualLpSolution, TransportError> {
    check_pair(g, mu, nu)?;
    let n = g.n();
    if n > DUAL_LP_MAX_N {
        return Err(TransportError::TooLarge { n, max: DUAL_LP_MAX_N });
    }
    let edges: Vec<(usize, usize)> = g.edges().flat_map(|(u, v)| [(u, v), (v, u)]).collect();
    let rows = edges.len();
    let cols = n + rows + 1;
    let rhs = cols - 1;
    // Row-major tableau; the last row is the objective.
    let mut t = vec![0.0; (rows + 1) * cols];
    for (r, &(u, v)) in edges.iter().enumerate() {
        t[r * cols + u] = 1.0;
        t[r * cols + v] = -1.0;
        t[r * cols + n + r] = 1.0;
        t[r * cols + rhs] = 1.0;
    }
    for x in 0..n {
        t[rows * cols + x] = -(mu[x] - nu[x]);
    }
    let mut basis: Vec<usize> = (n..n + rows).collect();

    let max_pivots = 50 * cols * cols;
    let mut pivots = 0;
    loop {
        let obj = &t[rows * cols..];
        let Some(enter) = (0..rhs).find(|&j| obj[j] < -PIVOT_TOL) else {
            break;
        };
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..rows {
            let a = t[r * cols + enter];
            if a > PIVOT_TOL {
                let ratio = t[r * cols + rhs] / a;
                let better = match leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio < best - PIVOT_TOL || (ratio <= best + PIVOT_TOL && basis[r] < basis[lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else {
            return Err(TransportError::Numerical("dual program reported unbounded".into()));
        };
        pivot(&mut t, cols, rows + 1, pr, enter);
        basis[pr] = enter;
        pivots += 1;
        if pivots > max_pivots {
            return Err(TransportError::Numerical("simplex pivot limit reached".into()));
        }
    }

    let mut f = vec![0.0; n];
    for (r, &b) in basis.iter().enumerate() {
        if b < n {
            f[b] = t[r * cols + rhs];
        }
    }
    let min = f.iter().cloned().fold(f64::INFINITY, f64::min);
    f.iter_mut().for_each(|v| *v -= min);
    Ok(DualLpSolution {
        value: t[rows * cols + rhs],
        potential: VertexFunction(f),
        pivots,
    })
}

fn pivot(t: &mut [f64], cols: usize, total_rows: usize, pr: usize, pc: usize) {
    let p = t[pr * cols + pc];
    for j in 0..cols {
        t[pr * cols + j] /= p;
    }
    let pivot_row: Vec<f64> = t[pr * cols..(pr + 1) * cols].to_vec();
    for r in 0..total_rows {
        if r == pr {
            continue;
        }
        let factor = t[r * cols + pc];
        if factor != 0.0 {
            for (j, &pv) in pivot_row.iter().enumerate() {
                t[r * cols + j] -= factor * pv;
            }
            t[r * cols + pc] = 0.0;
        }
    }
}
