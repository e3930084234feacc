use std::ops::{Deref, DerefMut};

use serde::{Deserialize, Serialize};

/// A real value per vertex.
///
/// Signed measures, potentials, eigenvectors and test functions all share this
/// shape; the vertex count is implied by the length.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexFunction(pub Vec<f64>);

/// Signed measures are vertex functions whose positive and negative parts are
/// interpreted as mass.
pub type SignedMeasure = VertexFunction;

impl VertexFunction {
    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self(vec![c; n])
    }

    /// Normalized counting measure `dx`: mass `1/n` on every vertex.
    pub fn uniform(n: usize) -> Self {
        Self::constant(n, 1.0 / n as f64)
    }

    pub fn delta(n: usize, x: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[x] = 1.0;
        v
    }

    /// Empirical measure `(1/k) Σ δ_{x_j}` of a vertex list (repeats count twice).
    pub fn empirical(n: usize, vertices: &[usize]) -> Self {
        let mut v = Self::zeros(n);
        let w = 1.0 / vertices.len() as f64;
        for &x in vertices {
            v.0[x] += w;
        }
        v
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn sum(&self) -> f64 {
        neumaier_sum(self.0.iter().copied())
    }

    pub fn mean(&self) -> f64 {
        self.sum() / self.0.len() as f64
    }

    pub fn l1_norm(&self) -> f64 {
        neumaier_sum(self.0.iter().map(|v| v.abs()))
    }

    pub fn l2_norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn positive_part(&self) -> Self {
        Self(self.0.iter().map(|v| v.max(0.0)).collect())
    }

    pub fn negative_part(&self) -> Self {
        Self(self.0.iter().map(|v| (-v).max(0.0)).collect())
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self(self.0.iter().map(|v| v * c).collect())
    }

    pub fn add_scaled(&mut self, other: &Self, c: f64) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += c * b;
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

impl From<Vec<f64>> for VertexFunction {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

impl Deref for VertexFunction {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for VertexFunction {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

/// Compensated (Neumaier) summation.
pub fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empirical_counts_repeats() {
        let v = VertexFunction::empirical(4, &[1, 1, 3, 0]);
        assert_eq!(v.0, vec![0.25, 0.5, 0.0, 0.25]);
    }

    #[test]
    fn parts_reconstruct() {
        let v = VertexFunction(vec![1.5, -2.0, 0.0, 0.5]);
        let back = v.positive_part().sub(&v.negative_part());
        assert_eq!(back, v);
        assert_eq!(v.l1_norm(), 4.0);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let vals = [1e16, 1.0, -1e16];
        assert_eq!(neumaier_sum(vals), 1.0);
    }
}
