//! Eigendecomposition of the random-walk Laplacian `L = Id - A D^{-1}` and
//! fractional powers `L^α` on vertex functions.
//!
//! For a regular graph `L` is symmetric and is diagonalized directly. For a
//! non-regular graph the symmetric conjugate `Id - D^{-1/2} A D^{-1/2}` is
//! diagonalized and its eigenvectors `ψ` are mapped to right eigenvectors
//! `φ = (D / d̄)^{1/2} ψ` of `L` (`d̄` is the mean degree). The `φ` are then
//! orthonormal under `⟨a, b⟩ = Σ w(x) a(x) b(x)` with `w = d̄ / deg`; for regular
//! graphs `w ≡ 1` and this is the plain inner product.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::function::VertexFunction;
use crate::graph::Graph;

/// Eigenvalues closer than this to zero are the trivial mode.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-9;

/// Eigenvalues closer than this are treated as one degenerate eigenspace.
pub const DEGENERACY_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("vertex function has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("vertex function has non-finite entries")]
    NonFinite,

    #[error("exponent must be nonzero and finite, got {0}")]
    InvalidExponent(f64),

    #[error("vertex index {vertex} out of range for n={n}")]
    IndexOutOfRange { vertex: usize, n: usize },

    #[error("eigendecomposition failed: {0}")]
    Numerical(String),

    #[error("malformed spectrum document: {0}")]
    Document(String),
}

/// Eigenpairs of `L`, ascending.
#[derive(Debug)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    /// Column `i` is `φ_i`.
    eigenvectors: DMatrix<f64>,
    weights: Vec<f64>,
    regular: bool,
    potentials: Mutex<HashMap<(usize, u64), Arc<VertexFunction>>>,
}

impl Clone for Spectrum {
    fn clone(&self) -> Self {
        Self::from_parts(
            self.eigenvalues.clone(),
            self.eigenvectors.clone(),
            self.weights.clone(),
            self.regular,
        )
    }
}

impl Spectrum {
    fn from_parts(
        eigenvalues: Vec<f64>,
        eigenvectors: DMatrix<f64>,
        weights: Vec<f64>,
        regular: bool,
    ) -> Self {
        Self { eigenvalues, eigenvectors, weights, regular, potentials: Mutex::new(HashMap::new()) }
    }

    /// Full dense eigendecomposition of `L` for a connected graph.
    pub fn decompose(g: &Graph) -> Result<Self, SpectralError> {
        let n = g.n();
        let deg: Vec<f64> = g.degrees().iter().map(|&d| d as f64).collect();
        let mean_deg = deg.iter().sum::<f64>() / n as f64;

        let mut sym = DMatrix::<f64>::identity(n, n);
        for (u, v) in g.edges() {
            let a = -1.0 / (deg[u] * deg[v]).sqrt();
            sym[(u, v)] = a;
            sym[(v, u)] = a;
        }
        let eig = SymmetricEigen::try_new(sym, f64::EPSILON, 0)
            .ok_or_else(|| SpectralError::Numerical("symmetric eigensolver did not converge".into()))?;

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

        let scale: Vec<f64> = deg.iter().map(|d| (d / mean_deg).sqrt()).collect();
        let mut eigenvalues = Vec::with_capacity(n);
        let mut eigenvectors = DMatrix::<f64>::zeros(n, n);
        for (col, &src) in order.iter().enumerate() {
            let mut lambda = eig.eigenvalues[src];
            if lambda.abs() < ZERO_EIGENVALUE_TOL {
                lambda = 0.0;
            }
            eigenvalues.push(lambda);
            let psi = eig.eigenvectors.column(src);
            // First entry that is clearly nonzero decides the sign.
            let pivot = psi.iter().copied().find(|x| x.abs() > 1e-10).unwrap_or(1.0);
            let sign = if pivot < 0.0 { -1.0 } else { 1.0 };
            for x in 0..n {
                eigenvectors[(x, col)] = sign * scale[x] * psi[x];
            }
        }
        if n > 1 && eigenvalues[1] <= ZERO_EIGENVALUE_TOL {
            return Err(SpectralError::Numerical(format!(
                "second eigenvalue {} is not positive; graph must be connected",
                eigenvalues[1]
            )));
        }
        let weights = deg.iter().map(|d| mean_deg / d).collect();
        Ok(Self::from_parts(eigenvalues, eigenvectors, weights, g.is_regular()))
    }

    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvalue(&self, i: usize) -> f64 {
        self.eigenvalues[i]
    }

    pub fn eigenvector(&self, i: usize) -> VertexFunction {
        VertexFunction(self.eigenvectors.column(i).iter().copied().collect())
    }

    pub fn eigenvector_matrix(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Whether the underlying graph was regular (weights all 1).
    pub fn is_regular(&self) -> bool {
        self.regular
    }

    /// Index ranges of (numerically) equal eigenvalues, in ascending order.
    pub fn eigenspaces(&self) -> Vec<std::ops::Range<usize>> {
        let mut groups = Vec::new();
        let mut start = 0;
        for i in 1..=self.n() {
            if i == self.n() || self.eigenvalues[i] - self.eigenvalues[i - 1] > DEGENERACY_TOL {
                groups.push(start..i);
                start = i;
            }
        }
        groups
    }

    /// The module inner product `Σ w a b`.
    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        self.weights.iter().zip(a).zip(b).map(|((w, x), y)| w * x * y).sum()
    }

    pub fn norm_sq(&self, v: &[f64]) -> f64 {
        self.inner(v, v)
    }

    fn check(&self, v: &[f64]) -> Result<(), SpectralError> {
        if v.len() != self.n() {
            return Err(SpectralError::LengthMismatch { expected: self.n(), got: v.len() });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(SpectralError::NonFinite);
        }
        Ok(())
    }

    /// Expansion coefficients `⟨v, φ_i⟩` for every mode.
    pub fn coefficients(&self, v: &[f64]) -> Result<Vec<f64>, SpectralError> {
        self.check(v)?;
        let wv: Vec<f64> = self.weights.iter().zip(v).map(|(w, x)| w * x).collect();
        let wv = nalgebra::DVector::from_vec(wv);
        Ok(self.eigenvectors.tr_mul(&wv).iter().copied().collect())
    }

    /// `Σ_i c_i φ_i`.
    pub fn synthesize(&self, coeffs: &[f64]) -> VertexFunction {
        let c = nalgebra::DVector::from_column_slice(coeffs);
        VertexFunction((&self.eigenvectors * c).iter().copied().collect())
    }

    /// `λ^α`, with the trivial mode mapped to 0 for every exponent.
    fn power(&self, i: usize, alpha: f64) -> f64 {
        let lambda = self.eigenvalues[i].max(0.0);
        if lambda == 0.0 {
            0.0
        } else {
            lambda.powf(alpha)
        }
    }

    /// `L^α v`. For negative `α` the trivial mode is skipped, so the output
    /// has zero sum.
    pub fn apply_fractional(&self, v: &[f64], alpha: f64) -> Result<VertexFunction, SpectralError> {
        if alpha == 0.0 || !alpha.is_finite() {
            return Err(SpectralError::InvalidExponent(alpha));
        }
        let mut c = self.coefficients(v)?;
        for (i, ci) in c.iter_mut().enumerate() {
            *ci *= self.power(i, alpha);
        }
        Ok(self.synthesize(&c))
    }

    /// `L^{-α} δ_x`, memoized per `(x, α)`.
    pub fn point_potential(&self, x: usize, alpha: f64) -> Result<Arc<VertexFunction>, SpectralError> {
        if x >= self.n() {
            return Err(SpectralError::IndexOutOfRange { vertex: x, n: self.n() });
        }
        if alpha <= 0.0 || !alpha.is_finite() {
            return Err(SpectralError::InvalidExponent(alpha));
        }
        let key = (x, alpha.to_bits());
        if let Some(hit) = self.potentials.lock().unwrap().get(&key) {
            return Ok(Arc::clone(hit));
        }
        let wx = self.weights[x];
        let c: Vec<f64> = (0..self.n())
            .map(|i| wx * self.eigenvectors[(x, i)] * self.power(i, -alpha))
            .collect();
        let pot = Arc::new(self.synthesize(&c));
        self.potentials.lock().unwrap().insert(key, Arc::clone(&pot));
        Ok(pot)
    }

    /// `‖L^{-α} v‖² = Σ_{i≥2} |⟨v, φ_i⟩|² λ_i^{-2α}` in the module inner product.
    pub fn inverse_energy(&self, v: &[f64], alpha: f64) -> Result<f64, SpectralError> {
        if alpha <= 0.0 || !alpha.is_finite() {
            return Err(SpectralError::InvalidExponent(alpha));
        }
        let c = self.coefficients(v)?;
        Ok(c.iter().enumerate().map(|(i, ci)| ci * ci * self.power(i, -2.0 * alpha)).sum())
    }

    /// Largest entry of `AD⁻¹φ_i − (1 − λ_i)φ_i` over all modes; small when the
    /// spectrum belongs to `g`.
    pub fn residual(&self, g: &Graph) -> f64 {
        if g.n() != self.n() {
            return f64::INFINITY;
        }
        (0..self.n())
            .map(|i| {
                let phi = self.eigenvector(i);
                let scale = 1.0 - self.eigenvalues[i];
                crate::graph::diffuse(g, &phi)
                    .iter()
                    .zip(phi.iter())
                    .map(|(a, b)| (a - scale * b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    pub fn to_document(&self) -> SpectrumDocument {
        let n = self.n();
        let mut eigenvectors = Vec::with_capacity(n * n);
        for x in 0..n {
            for i in 0..n {
                eigenvectors.push(self.eigenvectors[(x, i)]);
            }
        }
        SpectrumDocument {
            n,
            regular: self.regular,
            eigenvalues: self.eigenvalues.clone(),
            eigenvectors,
            weights: self.weights.clone(),
        }
    }

    pub fn from_document(doc: SpectrumDocument) -> Result<Self, SpectralError> {
        let n = doc.n;
        if doc.eigenvalues.len() != n || doc.weights.len() != n || doc.eigenvectors.len() != n * n {
            return Err(SpectralError::Document(format!(
                "sizes do not match n={n}: {} eigenvalues, {} weights, {} vector entries",
                doc.eigenvalues.len(),
                doc.weights.len(),
                doc.eigenvectors.len()
            )));
        }
        let all = doc.eigenvalues.iter().chain(&doc.weights).chain(&doc.eigenvectors);
        if all.clone().any(|x| !x.is_finite()) {
            return Err(SpectralError::NonFinite);
        }
        if doc.eigenvalues.windows(2).any(|w| w[0] > w[1]) {
            return Err(SpectralError::Document("eigenvalues are not ascending".into()));
        }
        let eigenvectors = DMatrix::from_row_slice(n, n, &doc.eigenvectors);
        Ok(Self::from_parts(doc.eigenvalues, eigenvectors, doc.weights, doc.regular))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("spectrum serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, SpectralError> {
        let doc: SpectrumDocument =
            serde_json::from_str(text).map_err(|e| SpectralError::Document(e.to_string()))?;
        Self::from_document(doc)
    }
}

/// Serialized spectrum: eigenvalues plus the row-major `n × n` eigenvector
/// matrix (row = vertex, column = mode).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDocument {
    pub n: usize,
    pub regular: bool,
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<f64>,
    pub weights: Vec<f64>,
}
