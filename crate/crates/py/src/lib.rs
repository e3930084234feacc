//! Python bindings. Vertex functions cross the boundary as lists of floats.

use std::sync::Arc;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use wellspread::bench::{self, BenchError, GraphSpec};
use wellspread::sampler::{self, SamplerError};
use wellspread::transport::{self, TransportError};
use wellspread::{GraphError, SpectralError, VertexFunction};

fn input_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn spectral_err(e: SpectralError) -> PyErr {
    match e {
        SpectralError::Numerical(_) => PyRuntimeError::new_err(e.to_string()),
        _ => input_err(e),
    }
}

fn transport_err(e: TransportError) -> PyErr {
    match e {
        TransportError::Numerical(_) => PyRuntimeError::new_err(e.to_string()),
        TransportError::Spectral(s) => spectral_err(s),
        _ => input_err(e),
    }
}

fn sampler_err(e: SamplerError) -> PyErr {
    match e {
        SamplerError::Spectral(s) => spectral_err(s),
        _ => input_err(e),
    }
}

fn bench_err(e: BenchError) -> PyErr {
    match e {
        BenchError::Spectral(s) => spectral_err(s),
        BenchError::Transport(t) => transport_err(t),
        BenchError::Sampler(s) => sampler_err(s),
        _ => input_err(e),
    }
}

fn graph_err(e: GraphError) -> PyErr {
    input_err(e)
}

#[pyclass(name = "Graph", frozen)]
struct PyGraph {
    inner: Arc<wellspread::Graph>,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(PyGraph { inner: Arc::new(wellspread::Graph::from_edges(n, &edges).map_err(graph_err)?) })
    }

    /// `Graph.generate("torus_grid", [6, 6])`.
    #[staticmethod]
    #[pyo3(signature = (name, params = Vec::new()))]
    fn generate(name: &str, params: Vec<usize>) -> PyResult<Self> {
        let g = wellspread::graph::generate_named(name, &params).map_err(graph_err)?;
        Ok(PyGraph { inner: Arc::new(g) })
    }

    /// Same syntax as the CLI `--graph` flag, e.g. `"cycle:6"` or `"file:g.txt"`.
    #[staticmethod]
    fn from_spec(spec: &str) -> PyResult<Self> {
        let spec: GraphSpec = spec.parse().map_err(bench_err)?;
        Ok(PyGraph { inner: Arc::new(spec.build().map_err(bench_err)?) })
    }

    #[staticmethod]
    fn from_edge_list(text: &str) -> PyResult<Self> {
        Ok(PyGraph { inner: Arc::new(wellspread::graph::from_edge_list(text).map_err(graph_err)?) })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn degrees(&self) -> Vec<usize> {
        self.inner.degrees().to_vec()
    }

    #[getter]
    fn diameter(&self) -> u32 {
        self.inner.diameter()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    fn neighbors(&self, v: usize) -> PyResult<Vec<usize>> {
        self.inner.check_vertex(v).map_err(graph_err)?;
        Ok(self.inner.neighbors(v).to_vec())
    }

    fn distance(&self, u: usize, v: usize) -> PyResult<u32> {
        self.inner.check_vertex(u).map_err(graph_err)?;
        self.inner.check_vertex(v).map_err(graph_err)?;
        Ok(self.inner.metric().dist(u, v))
    }

    fn diffuse(&self, v: Vec<f64>) -> PyResult<Vec<f64>> {
        if v.len() != self.inner.n() {
            return Err(input_err(format!("expected {} values, got {}", self.inner.n(), v.len())));
        }
        Ok(wellspread::graph::diffuse(&self.inner, &VertexFunction(v)).into_inner())
    }

    fn to_edge_list(&self) -> String {
        self.inner.to_edge_list()
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, edges={})", self.inner.n(), self.inner.edge_count())
    }
}

#[pyclass(name = "Spectrum", frozen)]
struct PySpectrum {
    inner: Arc<wellspread::Spectrum>,
}

#[pymethods]
impl PySpectrum {
    #[new]
    fn new(graph: &PyGraph) -> PyResult<Self> {
        Ok(PySpectrum { inner: Arc::new(wellspread::Spectrum::decompose(&graph.inner).map_err(spectral_err)?) })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PySpectrum { inner: Arc::new(wellspread::Spectrum::from_json(text).map_err(spectral_err)?) })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn eigenvalues(&self) -> Vec<f64> {
        self.inner.eigenvalues().to_vec()
    }

    fn eigenvector(&self, i: usize) -> PyResult<Vec<f64>> {
        if i >= self.inner.n() {
            return Err(input_err(format!("mode {i} out of range for n={}", self.inner.n())));
        }
        Ok(self.inner.eigenvector(i).into_inner())
    }

    fn coefficients(&self, v: Vec<f64>) -> PyResult<Vec<f64>> {
        self.inner.coefficients(&v).map_err(spectral_err)
    }

    fn apply_fractional(&self, v: Vec<f64>, alpha: f64) -> PyResult<Vec<f64>> {
        Ok(self.inner.apply_fractional(&v, alpha).map_err(spectral_err)?.into_inner())
    }

    fn point_potential(&self, x: usize, alpha: f64) -> PyResult<Vec<f64>> {
        Ok(self.inner.point_potential(x, alpha).map_err(spectral_err)?.to_vec())
    }
}

#[pyclass(name = "SampleSequence", frozen)]
struct PySampleSequence {
    inner: sampler::SampleSequence,
}

#[pymethods]
impl PySampleSequence {
    #[getter]
    fn vertices(&self) -> Vec<usize> {
        self.inner.vertices.clone()
    }

    #[getter]
    fn potential(&self) -> Vec<f64> {
        self.inner.potential.to_vec()
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    /// `(k, lhs, rhs, holds)` per prefix.
    #[getter]
    fn certificate(&self) -> Vec<(usize, f64, f64, bool)> {
        self.inner.certificate.iter().map(|r| (r.k, r.lhs, r.rhs, r.holds && r.step_holds)).collect()
    }

    fn prefix_measure(&self, k: usize) -> PyResult<Vec<f64>> {
        if k == 0 || k > self.inner.len() {
            return Err(input_err(format!("k={k} outside [1, {}]", self.inner.len())));
        }
        Ok(self.inner.prefix_measure(k).into_inner())
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

#[pyclass(name = "TransportResult", frozen)]
struct PyTransportResult {
    inner: transport::TransportResult,
}

#[pymethods]
impl PyTransportResult {
    #[getter]
    fn cost(&self) -> f64 {
        self.inner.cost
    }

    /// `(source, target, mass)` triples.
    #[getter]
    fn plan(&self) -> Vec<(usize, usize, f64)> {
        self.inner.plan.iter().map(|p| (p.source, p.target, p.mass)).collect()
    }

    #[getter]
    fn dual(&self) -> Vec<f64> {
        self.inner.dual.to_vec()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn __repr__(&self) -> String {
        format!("TransportResult(cost={}, plan_entries={})", self.inner.cost, self.inner.plan.len())
    }
}

fn spectrum_for(graph: &PyGraph, spectrum: Option<&PySpectrum>) -> PyResult<Arc<wellspread::Spectrum>> {
    match spectrum {
        Some(s) if s.inner.n() == graph.inner.n() => Ok(s.inner.clone()),
        Some(s) => Err(input_err(format!("spectrum has n={}, graph has n={}", s.inner.n(), graph.inner.n()))),
        None => Ok(Arc::new(wellspread::Spectrum::decompose(&graph.inner).map_err(spectral_err)?)),
    }
}

#[pyfunction]
#[pyo3(signature = (graph, start, k, alpha = sampler::DEFAULT_ALPHA, spectrum = None))]
fn run_sequence(
    py: Python<'_>,
    graph: &PyGraph,
    start: usize,
    k: usize,
    alpha: f64,
    spectrum: Option<&PySpectrum>,
) -> PyResult<PySampleSequence> {
    let s = spectrum_for(graph, spectrum)?;
    let inner = py.detach(|| sampler::run_sequence_with(&s, start, k, alpha)).map_err(sampler_err)?;
    Ok(PySampleSequence { inner })
}

#[pyfunction]
fn wasserstein1(py: Python<'_>, graph: &PyGraph, mu: Vec<f64>, nu: Vec<f64>) -> PyResult<PyTransportResult> {
    let g = graph.inner.clone();
    let inner = py
        .detach(|| transport::wasserstein1(&g, &VertexFunction(mu), &VertexFunction(nu)))
        .map_err(transport_err)?;
    Ok(PyTransportResult { inner })
}

#[pyfunction]
fn tree_w1_oracle(graph: &PyGraph, mu: Vec<f64>, nu: Vec<f64>) -> PyResult<f64> {
    transport::tree_w1_oracle(&graph.inner, &VertexFunction(mu), &VertexFunction(nu)).map_err(transport_err)
}

/// Returns `(lhs, rhs, holds)`.
#[pyfunction]
fn kr_verify(graph: &PyGraph, f: Vec<f64>, w_set: Vec<usize>) -> PyResult<(f64, f64, bool)> {
    let c = transport::kr_verify(&graph.inner, &VertexFunction(f), &w_set).map_err(transport_err)?;
    Ok((c.lhs, c.rhs, c.holds))
}

/// Returns `(spectral, trivial, best)`.
#[pyfunction]
fn eigvec_bound(lambda: f64, phi: Vec<f64>, diam: u32) -> PyResult<(f64, f64, f64)> {
    let b = transport::eigvec_bound(lambda, &VertexFunction(phi), diam).map_err(transport_err)?;
    Ok((b.spectral, b.trivial, b.best))
}

#[pyfunction]
#[pyo3(signature = (graph, mu, spectrum = None, tol = transport::DEFAULT_TAIL_TOL))]
fn combined_bound(
    py: Python<'_>,
    graph: &PyGraph,
    mu: Vec<f64>,
    spectrum: Option<&PySpectrum>,
    tol: f64,
) -> PyResult<f64> {
    let s = spectrum_for(graph, spectrum)?;
    let g = graph.inner.clone();
    let b = py
        .detach(|| transport::combined_bound(&g, &s, &VertexFunction(mu), tol))
        .map_err(transport_err)?;
    Ok(b.value)
}

/// Returns `(mean, standard_error)`.
#[pyfunction]
#[pyo3(signature = (graph, k, trials = bench::DEFAULT_TRIALS, seed = bench::DEFAULT_SEED))]
fn random_baseline(py: Python<'_>, graph: &PyGraph, k: usize, trials: usize, seed: u64) -> PyResult<(f64, f64)> {
    let g = graph.inner.clone();
    let b = py.detach(|| bench::random_baseline(&g, k, trials, seed)).map_err(bench_err)?;
    Ok((b.mean, b.std_error))
}

/// `(eigenvalue, quotient, degenerate)` per distinct nontrivial eigenvalue.
#[pyfunction]
#[pyo3(signature = (graph, spectrum = None))]
fn figure_tightness(
    py: Python<'_>,
    graph: &PyGraph,
    spectrum: Option<&PySpectrum>,
) -> PyResult<Vec<(f64, f64, bool)>> {
    let s = spectrum_for(graph, spectrum)?;
    let g = graph.inner.clone();
    let points = py.detach(|| bench::figure_tightness(&g, &s)).map_err(bench_err)?;
    Ok(points.into_iter().map(|p| (p.eigenvalue, p.quotient, p.degenerate)).collect())
}

/// `(x, discrete, continuous or None)` on the cycle `C_n`.
#[pyfunction]
#[pyo3(signature = (n, alpha = sampler::DEFAULT_ALPHA))]
fn figure_potential_profile(n: usize, alpha: f64) -> PyResult<Vec<(usize, f64, Option<f64>)>> {
    let points = bench::figure_potential_profile(n, alpha).map_err(bench_err)?;
    Ok(points.into_iter().map(|p| (p.x, p.discrete, p.continuous)).collect())
}

#[pymodule]
#[pyo3(name = "wellspread")]
fn wellspread_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PySpectrum>()?;
    m.add_class::<PySampleSequence>()?;
    m.add_class::<PyTransportResult>()?;
    m.add_function(wrap_pyfunction!(run_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(wasserstein1, m)?)?;
    m.add_function(wrap_pyfunction!(tree_w1_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(kr_verify, m)?)?;
    m.add_function(wrap_pyfunction!(eigvec_bound, m)?)?;
    m.add_function(wrap_pyfunction!(combined_bound, m)?)?;
    m.add_function(wrap_pyfunction!(random_baseline, m)?)?;
    m.add_function(wrap_pyfunction!(figure_tightness, m)?)?;
    m.add_function(wrap_pyfunction!(figure_potential_profile, m)?)?;
    Ok(())
}
