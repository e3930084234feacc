use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wellspread::bench::{
    figure_potential_profile, figure_tightness, profile_to_csv, table_report_with, tightness_to_csv, BenchConfig,
    BenchError, GraphSpec, OutputFormat, StartChoice, DEFAULT_SEED, DEFAULT_TRIALS,
};
use wellspread::sampler::{run_sequence_with, SamplerError, DEFAULT_ALPHA};
use wellspread::transport::{combined_bound, eigenvector_report, wasserstein1, TransportError, DEFAULT_TAIL_TOL};
use wellspread::{Graph, GraphError, SpectralError, Spectrum, VertexFunction};

#[derive(Parser)]
#[command(name = "wellspread", version, about = "Well-distributed vertex sequences and exact W1 transport on graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a graph as an edge list.
    Generate {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Greedy sequence as JSON (vertices, potential, energy certificate).
    Sample {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value_t = 0)]
        start: usize,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
        #[command(flatten)]
        cache: SpectrumArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact W1 between two measures given as JSON arrays.
    W1 {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        mu: PathBuf,
        /// Defaults to the uniform measure.
        #[arg(long)]
        nu: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigenvector transport bounds, or the combined bound for `--mu`.
    Bound {
        #[command(flatten)]
        graph: GraphArg,
        /// Probability measure (JSON array) to bound W1(mu, dx) for.
        #[arg(long)]
        mu: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TAIL_TOL)]
        tol: f64,
        #[arg(long, default_value = "json")]
        format: OutputFormat,
        #[command(flatten)]
        cache: SpectrumArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Greedy vs random-subset W1 table.
    Table {
        #[command(flatten)]
        graph: GraphArg,
        /// Comma-separated k values.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6,7,8,9,10")]
        k: Vec<usize>,
        /// Start vertex; all starts when omitted.
        #[arg(long)]
        start: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value = "csv")]
        format: OutputFormat,
        #[command(flatten)]
        cache: SpectrumArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Figure data.
    #[command(subcommand)]
    Figure(Figure),
}

#[derive(Subcommand)]
enum Figure {
    /// Point potential on the cycle C_n next to the circle kernel.
    Potential {
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
        #[arg(long, default_value = "csv")]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bound tightness per distinct eigenvalue.
    Tightness {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value = "csv")]
        format: OutputFormat,
        #[command(flatten)]
        cache: SpectrumArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GraphArg {
    /// `cycle:6`, `torus_grid:6,6`, `frucht`, `menger2`, `file:<path>`, `faulkner_younger:<path>`, ...
    #[arg(long)]
    graph: GraphSpec,
}

#[derive(Args)]
struct SpectrumArg {
    /// Spectrum cache (JSON). Read if present, written otherwise.
    #[arg(long)]
    spectrum: Option<PathBuf>,
}

enum Failure {
    Input(String),
    Infeasible(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Infeasible(_) => 3,
            Failure::Numerical(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Infeasible(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<SpectralError> for Failure {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::Numerical(_) => Failure::Numerical(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<SamplerError> for Failure {
    fn from(e: SamplerError) -> Self {
        match e {
            SamplerError::Spectral(s) => s.into(),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<TransportError> for Failure {
    fn from(e: TransportError) -> Self {
        match e {
            TransportError::MassMismatch { .. } => Failure::Infeasible(e.to_string()),
            TransportError::Numerical(_) => Failure::Numerical(e.to_string()),
            TransportError::Spectral(s) => s.into(),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::Graph(g) => g.into(),
            BenchError::Spectral(s) => s.into(),
            BenchError::Sampler(s) => s.into(),
            BenchError::Transport(t) => t.into(),
            BenchError::Config(_) | BenchError::Io { .. } => Failure::Input(e.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| io_failure(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serializes") + "\n"
}

fn read_measure(path: &Path) -> Result<VertexFunction, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_spectrum(g: &Graph, cache: &SpectrumArg) -> Result<Spectrum, Failure> {
    let Some(path) = &cache.spectrum else {
        return Ok(Spectrum::decompose(g)?);
    };
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
        let s = Spectrum::from_json(&text)?;
        let residual = s.residual(g);
        if residual > 1e-8 {
            return Err(Failure::Input(format!(
                "{}: cached spectrum does not belong to this graph (residual {residual:.2e})",
                path.display()
            )));
        }
        log::info!("loaded spectrum from {}", path.display());
        return Ok(s);
    }
    let s = Spectrum::decompose(g)?;
    std::fs::write(path, s.to_json()).map_err(|e| io_failure(path, e))?;
    log::info!("wrote spectrum to {}", path.display());
    Ok(s)
}

fn build(graph: &GraphArg) -> Result<Graph, Failure> {
    Ok(graph.graph.build()?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Generate { graph, out } => {
            let g = build(&graph)?;
            emit(&g.to_edge_list(), out.as_deref())
        }
        Command::Sample { graph, start, k, alpha, cache, out } => {
            let g = build(&graph)?;
            let s = load_spectrum(&g, &cache)?;
            let seq = run_sequence_with(&s, start, k, alpha)?;
            emit(&to_json(&seq), out.as_deref())
        }
        Command::W1 { graph, mu, nu, out } => {
            let g = build(&graph)?;
            let mu = read_measure(&mu)?;
            let nu = match nu {
                Some(p) => read_measure(&p)?,
                None => VertexFunction::uniform(g.n()),
            };
            let result = wasserstein1(&g, &mu, &nu)?;
            emit(&(result.to_json() + "\n"), out.as_deref())
        }
        Command::Bound { graph, mu, tol, format, cache, out } => {
            let g = build(&graph)?;
            let s = load_spectrum(&g, &cache)?;
            match mu {
                Some(path) => {
                    let mu = read_measure(&path)?;
                    let b = combined_bound(&g, &s, &mu, tol)?;
                    let text = match format {
                        OutputFormat::Json => to_json(&b),
                        OutputFormat::Csv => format!(
                            "value,series,tail,extreme,iterations,rate\n{},{},{},{},{},{}\n",
                            b.value, b.series, b.tail, b.extreme, b.iterations, b.rate
                        ),
                    };
                    emit(&text, out.as_deref())
                }
                None => {
                    let report = eigenvector_report(&g, &s)?;
                    let text = match format {
                        OutputFormat::Json => to_json(&report),
                        OutputFormat::Csv => {
                            let mut t = String::from("index,eigenvalue,w1,l1_norm,spectral,trivial,best,quotient,holds\n");
                            for m in report.iter().flat_map(|r| &r.modes) {
                                t += &format!(
                                    "{},{},{},{},{},{},{},{},{}\n",
                                    m.index,
                                    m.eigenvalue,
                                    m.w1,
                                    m.l1_norm,
                                    m.bound.spectral,
                                    m.bound.trivial,
                                    m.bound.best,
                                    m.quotient,
                                    m.holds
                                );
                            }
                            t
                        }
                    };
                    emit(&text, out.as_deref())
                }
            }
        }
        Command::Table { graph, k, start, alpha, trials, seed, format, cache, out } => {
            let g = build(&graph)?;
            let config = BenchConfig {
                graph: graph.graph,
                alpha,
                ks: k,
                trials,
                seed,
                start: start.map_or(StartChoice::Sweep, StartChoice::Vertex),
                format,
                out: out.clone(),
            };
            config.validate(g.n())?;
            let s = load_spectrum(&g, &cache)?;
            let doc = table_report_with(&g, &s, &config)?;
            emit(&doc.render(format), out.as_deref())
        }
        Command::Figure(Figure::Potential { n, alpha, format, out }) => {
            let points = figure_potential_profile(n, alpha)?;
            let text = match format {
                OutputFormat::Csv => profile_to_csv(&points),
                OutputFormat::Json => to_json(&points),
            };
            emit(&text, out.as_deref())
        }
        Command::Figure(Figure::Tightness { graph, format, cache, out }) => {
            let g = build(&graph)?;
            let s = load_spectrum(&g, &cache)?;
            let points = figure_tightness(&g, &s)?;
            let text = match format {
                OutputFormat::Csv => tightness_to_csv(&points),
                OutputFormat::Json => to_json(&points),
            };
            emit(&text, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
