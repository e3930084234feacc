//! Exact Wasserstein-1 distance on the hop metric, its dual certificates and
//! spectral upper bounds.

mod bounds;
mod flow;
mod lp;
mod tree;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::function::{neumaier_sum, VertexFunction};
use crate::graph::Graph;
use crate::spectral::SpectralError;

pub use bounds::{
    combined_bound, eigvec_bound, eigenvector_report, CombinedBound, EigenspaceReport, EigvecBound, ModeReport,
    DEFAULT_TAIL_TOL,
};
pub use lp::{dual_lp_w1, DualLpSolution, DUAL_LP_MAX_N};
pub use tree::tree_w1_oracle;

/// Allowed difference between the total masses of two transported measures.
pub const MASS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransportError {
    #[error("measure has {got} entries, graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("measure contains non-finite entries")]
    NonFinite,
    #[error("total masses differ: {mu} vs {nu}")]
    MassMismatch { mu: f64, nu: f64 },
    #[error("graph is not a tree ({n} vertices, {edges} edges)")]
    NotATree { n: usize, edges: usize },
    #[error("graph has {n} vertices; this routine accepts at most {max}")]
    TooLarge { n: usize, max: usize },
    #[error("vertex subset is empty")]
    EmptySubset,
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("not a probability measure: {0}")]
    NotProbability(String),
    #[error("eigenvalue {0} is not positive")]
    InvalidEigenvalue(f64),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// One entry of a transport plan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanEntry {
    pub source: usize,
    pub target: usize,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransportResult {
    pub cost: f64,
    /// Mass moved from `source` to `target`, sorted by `(source, target)`.
    /// Mass shared by both measures stays in place and is not listed.
    pub plan: Vec<PlanEntry>,
    /// A 1-Lipschitz function with `Σ dual·(mu − nu) = cost`.
    pub dual: VertexFunction,
}

impl TransportResult {
    /// `Σ dual·(mu − nu)`.
    pub fn dual_objective(&self, mu: &VertexFunction, nu: &VertexFunction) -> f64 {
        neumaier_sum(self.dual.iter().zip(mu.iter().zip(nu.iter())).map(|(f, (a, b))| f * (a - b)))
    }

    /// `Σ mass · dist(source, target)`.
    pub fn plan_cost(&self, g: &Graph) -> f64 {
        let metric = g.metric();
        neumaier_sum(self.plan.iter().map(|p| p.mass * metric.dist(p.source, p.target) as f64))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transport result serializes")
    }
}

pub(crate) fn check_measure(g: &Graph, v: &VertexFunction) -> Result<(), TransportError> {
    if v.len() != g.n() {
        return Err(TransportError::LengthMismatch { expected: g.n(), got: v.len() });
    }
    if !v.is_finite() {
        return Err(TransportError::NonFinite);
    }
    Ok(())
}

pub(crate) fn check_pair(g: &Graph, mu: &VertexFunction, nu: &VertexFunction) -> Result<(), TransportError> {
    check_measure(g, mu)?;
    check_measure(g, nu)?;
    let (a, b) = (mu.sum(), nu.sum());
    if (a - b).abs() > MASS_TOL * a.abs().max(b.abs()).max(1.0) {
        return Err(TransportError::MassMismatch { mu: a, nu: b });
    }
    Ok(())
}

/// Exact W1 between `mu` and `nu` on the hop metric of `g`.
///
/// Solved as an uncapacitated unit-cost flow on the edges of `g` with supplies
/// `mu − nu`. The returned dual is integer valued and shifted to have minimum 0.
pub fn wasserstein1(g: &Graph, mu: &VertexFunction, nu: &VertexFunction) -> Result<TransportResult, TransportError> {
    check_pair(g, mu, nu)?;
    let supply: Vec<f64> = mu.iter().zip(nu.iter()).map(|(a, b)| a - b).collect();
    let scale = mu.l1_norm().max(nu.l1_norm());
    if scale == 0.0 {
        return Ok(TransportResult { cost: 0.0, plan: Vec::new(), dual: VertexFunction::zeros(g.n()) });
    }
    let eps = 1e-14 * scale;
    let solution = flow::min_cost_flow(g, &supply, eps)?;
    let plan = flow::decompose_paths(g, &solution, &supply, eps)?
        .into_iter()
        .map(|(source, target, mass)| PlanEntry { source, target, mass })
        .collect();
    let cost = neumaier_sum(solution.flow.iter().map(|f| f.abs()));
    let top = solution.potential.iter().copied().max().unwrap_or(0);
    let dual = VertexFunction(solution.potential.iter().map(|&p| (top - p) as f64).collect());
    Ok(TransportResult { cost, plan, dual })
}

/// `max_{u∼v} |f(u) − f(v)|`.
pub fn lipschitz_constant(g: &Graph, f: &VertexFunction) -> f64 {
    g.edges().map(|(u, v)| (f[u] - f[v]).abs()).fold(0.0, f64::max)
}

/// Outcome of [`kr_verify`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KrCheck {
    /// `|mean_V f − mean_W f|`.
    pub lhs: f64,
    /// `W1(uniform on W, dx) · Lip(f)`.
    pub rhs: f64,
    pub holds: bool,
}

/// Checks the Kantorovich–Rubinstein inequality for `f` and the uniform
/// measure on `w_set` (repeated vertices count once).
pub fn kr_verify(g: &Graph, f: &VertexFunction, w_set: &[usize]) -> Result<KrCheck, TransportError> {
    check_measure(g, f)?;
    if w_set.is_empty() {
        return Err(TransportError::EmptySubset);
    }
    if let Some(&vertex) = w_set.iter().find(|&&v| v >= g.n()) {
        return Err(TransportError::VertexOutOfRange { vertex, n: g.n() });
    }
    let mut w: Vec<usize> = w_set.to_vec();
    w.sort_unstable();
    w.dedup();
    let mu_w = VertexFunction::empirical(g.n(), &w);
    let dx = VertexFunction::uniform(g.n());
    let w1 = wasserstein1(g, &mu_w, &dx)?.cost;
    let mean_w = neumaier_sum(w.iter().map(|&x| f[x])) / w.len() as f64;
    let lhs = (f.mean() - mean_w).abs();
    let rhs = w1 * lipschitz_constant(g, f);
    Ok(KrCheck { lhs, rhs, holds: lhs <= rhs + 1e-9 })
}
