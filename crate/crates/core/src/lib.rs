//! Greedy well-distributed vertex sequences on finite graphs, and exact and
//! spectral bounds on Wasserstein-1 transport over the hop metric.
//!
//! - [`graph`]: simple connected graphs, named generators, hop metric, diffusion `A D^{-1}`.
//! - [`spectral`]: eigendecomposition of `L = Id - A D^{-1}` and fractional powers.
//! - [`sampler`]: the greedy potential sampler and its energy certificate.
//! - [`transport`]: exact `W₁` by min-cost flow, verifiers, spectral bounds.
//! - [`bench`]: random baselines, table reproduction and figure data.

pub mod bench;
pub mod function;
pub mod graph;
pub mod sampler;
pub mod spectral;
pub mod transport;

pub use function::{SignedMeasure, VertexFunction};
pub use graph::{Graph, GraphError, Metric};
pub use spectral::{SpectralError, Spectrum};
