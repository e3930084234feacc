//! Reproducible experiments: greedy-vs-random transport tables and figure data.

use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::function::{neumaier_sum, VertexFunction};
use crate::graph::{faulkner_younger, from_edge_list, generate_named, Graph, GraphError};
use crate::sampler::{run_sequence_with, SamplerError, DEFAULT_ALPHA};
use crate::spectral::{SpectralError, Spectrum};
use crate::transport::{eigenvector_report, wasserstein1, TransportError};

pub const DEFAULT_TRIALS: usize = 1000;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// Where a graph comes from: `cycle:6`, `torus_grid:6,6`, `frucht`,
/// `file:<edge list>` or `faulkner_younger:<edge list>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GraphSpec {
    Named { name: String, params: Vec<usize> },
    File(PathBuf),
    FaulknerYounger(PathBuf),
}

impl GraphSpec {
    pub fn build(&self) -> Result<Graph, BenchError> {
        match self {
            GraphSpec::Named { name, params } => Ok(generate_named(name, params)?),
            GraphSpec::File(path) => Ok(from_edge_list(&read(path)?)?),
            GraphSpec::FaulknerYounger(path) => Ok(faulkner_younger(&read(path)?)?),
        }
    }
}

fn read(path: &PathBuf) -> Result<String, BenchError> {
    std::fs::read_to_string(path).map_err(|source| BenchError::Io { path: path.clone(), source })
}

impl FromStr for GraphSpec {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (s, None),
        };
        match (head, rest) {
            ("file", Some(p)) => Ok(GraphSpec::File(p.into())),
            ("faulkner_younger", Some(p)) => Ok(GraphSpec::FaulknerYounger(p.into())),
            (name, params) => {
                let params = match params {
                    None => Vec::new(),
                    Some(p) => p
                        .split(',')
                        .map(|x| x.trim().parse::<usize>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| BenchError::Config(format!("bad generator parameters in '{s}'")))?,
                };
                Ok(GraphSpec::Named { name: name.to_string(), params })
            }
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Named { name, params } if params.is_empty() => f.write_str(name),
            GraphSpec::Named { name, params } => {
                let p: Vec<String> = params.iter().map(|x| x.to_string()).collect();
                write!(f, "{name}:{}", p.join(","))
            }
            GraphSpec::File(p) => write!(f, "file:{}", p.display()),
            GraphSpec::FaulknerYounger(p) => write!(f, "faulkner_younger:{}", p.display()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(BenchError::Config(format!("unknown format '{other}' (expected csv or json)"))),
        }
    }
}

/// Which start vertices the algorithm column uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StartChoice {
    Vertex(usize),
    /// Every vertex, one block per start.
    Sweep,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub graph: GraphSpec,
    pub alpha: f64,
    pub ks: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub start: StartChoice,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

impl BenchConfig {
    pub fn new(graph: GraphSpec) -> Self {
        BenchConfig {
            graph,
            alpha: DEFAULT_ALPHA,
            ks: (1..=10).collect(),
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            start: StartChoice::Sweep,
            format: OutputFormat::Csv,
            out: None,
        }
    }

    pub fn validate(&self, n: usize) -> Result<(), BenchError> {
        if self.trials == 0 {
            return Err(BenchError::Config("trials must be at least 1".into()));
        }
        if self.ks.is_empty() {
            return Err(BenchError::Config("no k values given".into()));
        }
        if let Some(&k) = self.ks.iter().find(|&&k| k == 0 || k > n) {
            return Err(BenchError::Config(format!("k={k} outside [1, {n}]")));
        }
        if let StartChoice::Vertex(s) = self.start {
            if s >= n {
                return Err(BenchError::Config(format!("start vertex {s} out of range for n={n}")));
            }
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(BenchError::Config(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaselineStats {
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
    pub mean: f64,
    pub std_error: f64,
}

/// RNG for one baseline trial: the master seed picks the key, the trial index
/// the stream, so results do not depend on scheduling.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Mean `W1(uniform on a random k-subset, dx)` over `trials` subsets drawn
/// without replacement.
pub fn random_baseline(g: &Graph, k: usize, trials: usize, seed: u64) -> Result<BaselineStats, BenchError> {
    let n = g.n();
    if k == 0 || k > n {
        return Err(BenchError::Config(format!("k={k} outside [1, {n}]")));
    }
    if trials == 0 {
        return Err(BenchError::Config("trials must be at least 1".into()));
    }
    let dx = VertexFunction::uniform(n);
    let costs: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let subset = rand::seq::index::sample(&mut rng, n, k).into_vec();
            Ok(wasserstein1(g, &VertexFunction::empirical(n, &subset), &dx)?.cost)
        })
        .collect::<Result<_, BenchError>>()?;
    let mean = neumaier_sum(costs.iter().copied()) / trials as f64;
    let std_error = if trials > 1 {
        let var = neumaier_sum(costs.iter().map(|c| (c - mean) * (c - mean))) / (trials - 1) as f64;
        (var / trials as f64).sqrt()
    } else {
        0.0
    };
    Ok(BaselineStats { k, trials, seed, mean, std_error })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub k: usize,
    pub algorithm: f64,
    pub random: f64,
    pub random_std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableBlock {
    pub start: usize,
    pub vertices: Vec<usize>,
    pub rows: Vec<TableRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableDocument {
    pub graph: String,
    pub n: usize,
    pub alpha: f64,
    pub trials: usize,
    pub seed: u64,
    pub blocks: Vec<TableBlock>,
}

impl TableDocument {
    /// Two-decimal CSV, one line per (start, k).
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# graph={} n={} alpha={} trials={} seed={}",
            self.graph, self.n, self.alpha, self.trials, self.seed
        );
        s.push_str("start,k,algorithm,random,random_se\n");
        for block in &self.blocks {
            for r in &block.rows {
                let _ = writeln!(
                    s,
                    "{},{},{:.2},{:.2},{:.2}",
                    block.start, r.k, r.algorithm, r.random, r.random_std_error
                );
            }
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json() + "\n",
        }
    }

    pub fn block(&self, start: usize) -> Option<&TableBlock> {
        self.blocks.iter().find(|b| b.start == start)
    }
}

/// Builds the graph from the config and runs [`table_report_with`].
pub fn table_report(config: &BenchConfig) -> Result<TableDocument, BenchError> {
    let g = config.graph.build()?;
    config.validate(g.n())?;
    let spectrum = Spectrum::decompose(&g)?;
    table_report_with(&g, &spectrum, config)
}

/// Greedy and random-baseline W1 for each configured k.
pub fn table_report_with(g: &Graph, spectrum: &Spectrum, config: &BenchConfig) -> Result<TableDocument, BenchError> {
    let n = g.n();
    config.validate(n)?;
    let kmax = *config.ks.iter().max().expect("validated");
    let random: Vec<BaselineStats> = config
        .ks
        .iter()
        .map(|&k| random_baseline(g, k, config.trials, config.seed))
        .collect::<Result<_, _>>()?;
    let starts: Vec<usize> = match config.start {
        StartChoice::Vertex(s) => vec![s],
        StartChoice::Sweep => (0..n).collect(),
    };
    let dx = VertexFunction::uniform(n);
    let blocks = starts
        .into_par_iter()
        .map(|start| {
            let seq = run_sequence_with(spectrum, start, kmax, config.alpha)?;
            let rows = config
                .ks
                .iter()
                .zip(&random)
                .map(|(&k, base)| {
                    let algorithm = wasserstein1(g, &seq.prefix_measure(k), &dx)?.cost;
                    Ok(TableRow { k, algorithm, random: base.mean, random_std_error: base.std_error })
                })
                .collect::<Result<_, BenchError>>()?;
            Ok(TableBlock { start, vertices: seq.vertices, rows })
        })
        .collect::<Result<_, BenchError>>()?;
    Ok(TableDocument {
        graph: config.graph.to_string(),
        n,
        alpha: config.alpha,
        trials: config.trials,
        seed: config.seed,
        blocks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub x: usize,
    pub discrete: f64,
    /// `√2 · (−1/π) ln|2 sin(πx/n)|`; absent at `x = 0` and for `alpha ≠ 1/2`,
    /// where no closed form is emitted.
    pub continuous: Option<f64>,
}

/// `L^{-α} δ_0` on the cycle `C_n` next to the circle kernel.
pub fn figure_potential_profile(n: usize, alpha: f64) -> Result<Vec<ProfilePoint>, BenchError> {
    if n < 8 {
        return Err(BenchError::Config(format!("profile needs n >= 8, got {n}")));
    }
    let g = crate::graph::cycle(n);
    let spectrum = Spectrum::decompose(&g)?;
    let pot = spectrum.point_potential(0, alpha)?;
    let closed_form = (alpha - 0.5).abs() < 1e-12;
    Ok((0..n)
        .map(|x| ProfilePoint {
            x,
            discrete: pot[x],
            continuous: (closed_form && x != 0).then(|| circle_kernel(x, n)),
        })
        .collect())
}

/// `√2 · (−1/π) ln|2 sin(πx/n)|`.
pub fn circle_kernel(x: usize, n: usize) -> f64 {
    let s = (std::f64::consts::PI * x as f64 / n as f64).sin();
    -std::f64::consts::SQRT_2 / std::f64::consts::PI * (2.0 * s).abs().ln()
}

pub fn profile_to_csv(points: &[ProfilePoint]) -> String {
    let mut s = String::from("x,discrete,continuous\n");
    for p in points {
        match p.continuous {
            Some(c) => writeln!(s, "{},{},{}", p.x, p.discrete, c),
            None => writeln!(s, "{},{},", p.x, p.discrete),
        }
        .expect("writing to a String");
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TightnessPoint {
    pub eigenvalue: f64,
    pub multiplicity: usize,
    pub degenerate: bool,
    /// Max over the computed eigenbasis of `W1(φ⁺, φ⁻) / best bound`.
    pub quotient: f64,
}

/// Tightness of the eigenvector transport bound per distinct eigenvalue.
pub fn figure_tightness(g: &Graph, spectrum: &Spectrum) -> Result<Vec<TightnessPoint>, BenchError> {
    Ok(eigenvector_report(g, spectrum)?
        .into_iter()
        .map(|r| TightnessPoint {
            eigenvalue: r.eigenvalue,
            multiplicity: r.multiplicity,
            degenerate: r.degenerate,
            quotient: r.max_quotient,
        })
        .collect())
}

pub fn tightness_to_csv(points: &[TightnessPoint]) -> String {
    let mut s = String::from("eigenvalue,multiplicity,degenerate,quotient\n");
    for p in points {
        writeln!(s, "{},{},{},{}", p.eigenvalue, p.multiplicity, p.degenerate, p.quotient)
            .expect("writing to a String");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, truncated_tetrahedral};

    #[test]
    fn graph_spec_round_trip() {
        for s in ["cycle:6", "torus_grid:6,6", "frucht", "file:/tmp/g.txt", "faulkner_younger:fy.txt"] {
            let spec: GraphSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("cycle:x".parse::<GraphSpec>().is_err());
        assert_eq!("cycle:7".parse::<GraphSpec>().unwrap().build().unwrap().n(), 7);
    }

    #[test]
    fn baseline_on_complete_graph_is_exact() {
        let b = random_baseline(&complete(7), 1, 50, 3).unwrap();
        assert!((b.mean - 6.0 / 7.0).abs() < 1e-12);
        assert!(b.std_error < 1e-12);
    }

    #[test]
    fn baseline_on_transitive_graph_has_no_spread() {
        let b = random_baseline(&truncated_tetrahedral(), 1, 200, 9).unwrap();
        assert!((b.mean - 23.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn baseline_is_seed_deterministic() {
        let g = crate::graph::frucht();
        let a = random_baseline(&g, 4, 64, 11).unwrap();
        let b = random_baseline(&g, 4, 64, 11).unwrap();
        assert_eq!(a, b);
        let c = random_baseline(&g, 4, 64, 12).unwrap();
        assert_ne!(a.mean, c.mean);
        assert!(random_baseline(&g, 13, 10, 1).is_err());
        assert!(random_baseline(&g, 2, 0, 1).is_err());
    }

    #[test]
    fn k_equal_n_is_uniform() {
        let g = crate::graph::cycle(9);
        let b = random_baseline(&g, 9, 5, 0).unwrap();
        assert!(b.mean.abs() < 1e-12);
    }

    #[test]
    fn csv_layout() {
        let mut cfg = BenchConfig::new("truncated_tetrahedral".parse().unwrap());
        cfg.ks = vec![1, 2];
        cfg.trials = 10;
        cfg.start = StartChoice::Vertex(0);
        let doc = table_report(&cfg).unwrap();
        let csv = doc.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# graph=truncated_tetrahedral n=12 alpha=0.5 trials=10 seed=42");
        assert_eq!(lines[1], "start,k,algorithm,random,random_se");
        assert_eq!(lines[2], "0,1,1.92,1.92,0.00");
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn config_validation() {
        let mut cfg = BenchConfig::new("cycle:5".parse().unwrap());
        cfg.ks = vec![6];
        assert!(matches!(table_report(&cfg), Err(BenchError::Config(_))));
        cfg.ks = vec![1];
        cfg.trials = 0;
        assert!(matches!(table_report(&cfg), Err(BenchError::Config(_))));
        cfg.trials = 1;
        cfg.start = StartChoice::Vertex(5);
        assert!(matches!(table_report(&cfg), Err(BenchError::Config(_))));
    }

    #[test]
    fn profile_is_even() {
        let pts = figure_potential_profile(30, 0.5).unwrap();
        assert!(pts[0].continuous.is_none());
        for x in 1..30 {
            assert!((pts[x].discrete - pts[30 - x].discrete).abs() < 1e-9);
        }
        assert!(figure_potential_profile(7, 0.5).is_err());
        assert!(figure_potential_profile(12, 0.25).unwrap()[3].continuous.is_none());
    }
}
