use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::function::VertexFunction;
use crate::graph::{diffuse, Graph};
use crate::spectral::{Spectrum, DEGENERACY_TOL};

use super::{check_measure, wasserstein1, TransportError};

/// Default relative cutoff for the diffusion series in [`combined_bound`].
pub const DEFAULT_TAIL_TOL: f64 = 1e-6;

/// Diffusion steps after which [`combined_bound`] stops summing explicitly and
/// relies on the geometric tail.
pub const MAX_DIFFUSION_STEPS: usize = 20_000;

/// Upper bounds on `W1(φ⁺, φ⁻)` for one eigenpair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigvecBound {
    /// `‖φ‖₁ / (1 − |1 − λ|)`, infinite when `|1 − λ| ≥ 1`.
    pub spectral: f64,
    /// `(diam / 2) · ‖φ‖₁`.
    pub trivial: f64,
    pub best: f64,
    /// `|1 − λ| < 1 − 2/diam`, i.e. the spectral bound is the smaller one.
    pub spectral_regime: bool,
}

pub fn eigvec_bound(lambda: f64, phi: &VertexFunction, diam: u32) -> Result<EigvecBound, TransportError> {
    if lambda.is_nan() || lambda <= 0.0 || lambda.is_infinite() {
        return Err(TransportError::InvalidEigenvalue(lambda));
    }
    if !phi.is_finite() {
        return Err(TransportError::NonFinite);
    }
    let l1 = phi.l1_norm();
    let contraction = (1.0 - lambda).abs();
    let spectral = if contraction >= 1.0 { f64::INFINITY } else { l1 / (1.0 - contraction) };
    let trivial = diam as f64 / 2.0 * l1;
    Ok(EigvecBound {
        spectral,
        trivial,
        best: spectral.min(trivial),
        spectral_regime: contraction < 1.0 - 2.0 / diam as f64,
    })
}

/// Exact transport of one eigenvector against its bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeReport {
    pub index: usize,
    pub eigenvalue: f64,
    /// `W1(φ⁺, φ⁻)`.
    pub w1: f64,
    pub l1_norm: f64,
    pub bound: EigvecBound,
    /// `w1 / bound.best`.
    pub quotient: f64,
    pub holds: bool,
}

/// Modes grouped by (numerically) equal eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenspaceReport {
    pub eigenvalue: f64,
    pub multiplicity: usize,
    /// The eigenbasis inside a degenerate space is arbitrary, and so is
    /// `‖φ‖₁`; only the maximum quotient over the basis is reported.
    pub degenerate: bool,
    pub modes: Vec<ModeReport>,
    pub max_quotient: f64,
    pub holds: bool,
}

/// Computes `W1(φ⁺, φ⁻)` and the eigenvector bounds for every nontrivial mode.
pub fn eigenvector_report(g: &Graph, spectrum: &Spectrum) -> Result<Vec<EigenspaceReport>, TransportError> {
    let diam = g.diameter();
    let modes: Vec<ModeReport> = (1..spectrum.n())
        .into_par_iter()
        .map(|i| {
            let phi = spectrum.eigenvector(i);
            let lambda = spectrum.eigenvalue(i);
            let w1 = wasserstein1(g, &phi.positive_part(), &phi.negative_part())?.cost;
            let bound = eigvec_bound(lambda, &phi, diam)?;
            Ok(ModeReport {
                index: i,
                eigenvalue: lambda,
                w1,
                l1_norm: phi.l1_norm(),
                bound,
                quotient: w1 / bound.best,
                holds: w1 <= bound.best + 1e-9,
            })
        })
        .collect::<Result<_, TransportError>>()?;

    let mut reports = Vec::new();
    for space in spectrum.eigenspaces() {
        if space.start == 0 {
            continue;
        }
        let members: Vec<ModeReport> = modes[space.start - 1..space.end - 1].to_vec();
        let eigenvalue = members.iter().map(|m| m.eigenvalue).sum::<f64>() / members.len() as f64;
        reports.push(EigenspaceReport {
            eigenvalue,
            multiplicity: members.len(),
            degenerate: members.len() > 1,
            max_quotient: members.iter().map(|m| m.quotient).fold(0.0, f64::max),
            holds: members.iter().all(|m| m.holds),
            modes: members,
        });
    }
    debug_assert!(reports.windows(2).all(|w| w[1].eigenvalue - w[0].eigenvalue > DEGENERACY_TOL / 2.0));
    Ok(reports)
}

/// Parts of the frequency-split bound on `W1(mu, dx)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CombinedBound {
    pub value: f64,
    /// Explicitly summed `Σ ‖(AD⁻¹)^i μ̄‖₁`.
    pub series: f64,
    /// Certified bound on the unsummed remainder of the series.
    pub tail: f64,
    /// `(diam/2) · ‖μ̲‖₁` for the extreme-frequency part.
    pub extreme: f64,
    pub iterations: usize,
    /// Largest `|1 − λ|` among the mid-range modes (0 if there are none).
    pub rate: f64,
}

/// Upper bound on `W1(mu, dx)` from the spectrum alone.
///
/// `mu − dx` is split into `μ̄`, its components with `|1 − λ| < 1 − 2/diam`,
/// and the remainder `μ̲`. `μ̄` is carried to zero by repeated diffusion at
/// cost `Σ_i ‖(AD⁻¹)^i μ̄‖₁`; `μ̲` is bounded by the diameter. The series is
/// summed until a term drops below `tol · ‖μ̄‖₁` and the rest is bounded by
/// `sqrt(Σ deg) · ‖v‖_{D⁻¹} / (1 − r)`, where `v` is the first unsummed term.
/// `AD⁻¹` contracts mid-range vectors by `r` in the `D⁻¹`-weighted norm, so
/// the value is an upper bound wherever the series is cut.
pub fn combined_bound(g: &Graph, spectrum: &Spectrum, mu: &VertexFunction, tol: f64) -> Result<CombinedBound, TransportError> {
    check_measure(g, mu)?;
    if spectrum.n() != g.n() {
        return Err(TransportError::LengthMismatch { expected: g.n(), got: spectrum.n() });
    }
    if mu.iter().any(|&m| m < -1e-12) {
        return Err(TransportError::NotProbability("negative entry".into()));
    }
    if (mu.sum() - 1.0).abs() > 1e-9 {
        return Err(TransportError::NotProbability(format!("total mass {}", mu.sum())));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(TransportError::Numerical(format!("tail tolerance must be positive, got {tol}")));
    }

    let n = g.n();
    let diam = g.diameter() as f64;
    let threshold = 1.0 - 2.0 / diam;
    let signed = mu.sub(&VertexFunction::uniform(n));
    let coeffs = spectrum.coefficients(&signed)?;
    let mut mid = vec![0.0; n];
    let mut extreme = vec![0.0; n];
    let mut rate: f64 = 0.0;
    for (i, &c) in coeffs.iter().enumerate() {
        let contraction = (1.0 - spectrum.eigenvalue(i)).abs();
        if i > 0 && contraction < threshold {
            mid[i] = c;
            rate = rate.max(contraction);
        } else {
            extreme[i] = c;
        }
    }
    let mid_part = spectrum.synthesize(&mid);
    let extreme_part = spectrum.synthesize(&extreme);
    let extreme_cost = diam / 2.0 * extreme_part.l1_norm();

    let start = mid_part.l1_norm();
    let cutoff = tol * start;
    let mut terms = Vec::new();
    let mut v = mid_part;
    if start > 0.0 {
        loop {
            let size = v.l1_norm();
            if size < cutoff || terms.len() >= MAX_DIFFUSION_STEPS {
                break;
            }
            terms.push(size);
            v = diffuse(g, &v);
        }
    }
    let series = crate::function::neumaier_sum(terms.iter().copied());
    let tail = if start > 0.0 {
        let total_degree: f64 = g.degrees().iter().map(|&d| d as f64).sum();
        let weighted: f64 = v.iter().zip(g.degrees()).map(|(x, &d)| x * x / d as f64).sum::<f64>().sqrt();
        total_degree.sqrt() * weighted / (1.0 - rate)
    } else {
        0.0
    };
    Ok(CombinedBound {
        value: series + tail + extreme_cost,
        series,
        tail,
        extreme: extreme_cost,
        iterations: terms.len(),
        rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, frucht, menger2, torus_grid};

    #[test]
    fn eigvec_bound_edge_cases() {
        let phi = VertexFunction(vec![1.0, -1.0, 0.5, -0.5]);
        let b = eigvec_bound(1.0, &phi, 4).unwrap();
        assert_eq!(b.spectral, 3.0);
        assert_eq!(b.trivial, 6.0);
        assert_eq!(b.best, 3.0);
        assert!(b.spectral_regime);

        let b = eigvec_bound(2.0, &phi, 4).unwrap();
        assert!(b.spectral.is_infinite());
        assert_eq!(b.best, b.trivial);
        assert!(!b.spectral_regime);

        assert!(matches!(eigvec_bound(0.0, &phi, 4), Err(TransportError::InvalidEigenvalue(_))));
        assert!(matches!(eigvec_bound(-0.5, &phi, 4), Err(TransportError::InvalidEigenvalue(_))));
    }

    #[test]
    fn eigenvector_bound_holds_on_small_graphs() {
        for g in [cycle(9), frucht(), torus_grid(4, 5)] {
            let s = Spectrum::decompose(&g).unwrap();
            let report = eigenvector_report(&g, &s).unwrap();
            assert_eq!(report.iter().map(|r| r.multiplicity).sum::<usize>(), g.n() - 1);
            for space in &report {
                assert!(space.holds, "eigenvalue {}", space.eigenvalue);
                assert!(space.max_quotient > 0.0 && space.max_quotient <= 1.0 + 1e-9);
            }
        }
    }

    #[test]
    fn combined_bound_of_uniform_is_zero() {
        let g = menger2();
        let s = Spectrum::decompose(&g).unwrap();
        let b = combined_bound(&g, &s, &VertexFunction::uniform(g.n()), DEFAULT_TAIL_TOL).unwrap();
        assert!(b.value < 1e-10, "{b:?}");
    }

    #[test]
    fn combined_bound_dominates_exact_value() {
        let g = cycle(30);
        let s = Spectrum::decompose(&g).unwrap();
        let dx = VertexFunction::uniform(30);
        for subset in [vec![0], vec![0, 15], vec![0, 10, 20], vec![3, 4, 5, 6]] {
            let mu = VertexFunction::empirical(30, &subset);
            let exact = wasserstein1(&g, &mu, &dx).unwrap().cost;
            let b = combined_bound(&g, &s, &mu, DEFAULT_TAIL_TOL).unwrap();
            assert!(b.value >= exact - 1e-6, "{subset:?}: {} < {exact}", b.value);
            assert!(b.tail >= 0.0 && b.iterations > 0);
        }
    }

    #[test]
    fn combined_bound_rejects_non_probability() {
        let g = cycle(6);
        let s = Spectrum::decompose(&g).unwrap();
        let half = VertexFunction::constant(6, 0.5 / 6.0);
        assert!(matches!(
            combined_bound(&g, &s, &half, DEFAULT_TAIL_TOL),
            Err(TransportError::NotProbability(_))
        ));
        let neg = VertexFunction(vec![1.5, -0.5, 0.0, 0.0, 0.0, 0.0]);
        assert!(matches!(
            combined_bound(&g, &s, &neg, DEFAULT_TAIL_TOL),
            Err(TransportError::NotProbability(_))
        ));
    }
}
