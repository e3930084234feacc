//! Named graph families with pinned vertex numberings.
//!
//! | generator | numbering |
//! |-----------|-----------|
//! | `cycle(n)` | `0..n` around the ring |
//! | `path(n)` | `0..n` along the path |
//! | `complete(n)` | arbitrary, all vertices equivalent |
//! | `torus_grid(m, n)` | row-major, vertex `r * n + c` |
//! | `frucht`, `truncated_tetrahedral`, `nauru` | LCF numbering: Hamiltonian cycle `0..n` plus chords |
//! | `menger2` | lexicographic by integer cube coordinates `(x, y, z)` at scale 1/9 |
//! | `faulkner_younger` | whatever the supplied edge list uses |

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use super::{from_edge_list, Graph, GraphError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorId {
    Cycle,
    Path,
    Complete,
    TorusGrid,
    Frucht,
    TruncatedTetrahedral,
    Nauru,
    Menger2,
    FaulknerYounger,
}

impl GeneratorId {
    pub const ALL: [GeneratorId; 9] = [
        GeneratorId::Cycle,
        GeneratorId::Path,
        GeneratorId::Complete,
        GeneratorId::TorusGrid,
        GeneratorId::Frucht,
        GeneratorId::TruncatedTetrahedral,
        GeneratorId::Nauru,
        GeneratorId::Menger2,
        GeneratorId::FaulknerYounger,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorId::Cycle => "cycle",
            GeneratorId::Path => "path",
            GeneratorId::Complete => "complete",
            GeneratorId::TorusGrid => "torus_grid",
            GeneratorId::Frucht => "frucht",
            GeneratorId::TruncatedTetrahedral => "truncated_tetrahedral",
            GeneratorId::Nauru => "nauru",
            GeneratorId::Menger2 => "menger2",
            GeneratorId::FaulknerYounger => "faulkner_younger",
        }
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorId {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GeneratorId::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| GraphError::UnknownGenerator(s.to_string()))
    }
}

/// Builds a named graph. `params` are the integer arguments of the family
/// (`cycle(n)`, `torus_grid(m, n)`, ...); fixed graphs take none.
///
/// `faulkner_younger` has no built-in edge set; use [`faulkner_younger`] with
/// an edge list instead.
pub fn generate_named(name: &str, params: &[usize]) -> Result<Graph, GraphError> {
    let id: GeneratorId = name.parse()?;
    let invalid = |msg: &str| GraphError::InvalidParameters { name: id.name().into(), msg: msg.into() };
    let arity = match id {
        GeneratorId::Cycle | GeneratorId::Path | GeneratorId::Complete => 1,
        GeneratorId::TorusGrid => 2,
        _ => 0,
    };
    if params.len() != arity {
        return Err(invalid(&format!("expected {arity} parameter(s), got {}", params.len())));
    }
    match id {
        GeneratorId::Cycle => {
            if params[0] < 3 {
                return Err(invalid("cycle needs n >= 3"));
            }
            Ok(cycle(params[0]))
        }
        GeneratorId::Path => {
            if params[0] < 2 {
                return Err(invalid("path needs n >= 2"));
            }
            Ok(path(params[0]))
        }
        GeneratorId::Complete => {
            if params[0] < 2 {
                return Err(invalid("complete needs n >= 2"));
            }
            Ok(complete(params[0]))
        }
        GeneratorId::TorusGrid => {
            if params[0] < 3 || params[1] < 3 {
                return Err(invalid("torus_grid needs m, n >= 3"));
            }
            Ok(torus_grid(params[0], params[1]))
        }
        GeneratorId::Frucht => Ok(frucht()),
        GeneratorId::TruncatedTetrahedral => Ok(truncated_tetrahedral()),
        GeneratorId::Nauru => Ok(nauru()),
        GeneratorId::Menger2 => Ok(menger2()),
        GeneratorId::FaulknerYounger => Err(invalid(
            "no built-in edge set; supply one with faulkner_younger:<edge-list path>",
        )),
    }
}

fn build(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::from_edges(n, edges).expect("generator produced an invalid graph")
}

pub fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    build(n, &edges)
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
    build(n, &edges)
}

pub fn complete(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    build(n, &edges)
}

/// `C_m × C_n`, vertex `r * n + c`.
pub fn torus_grid(m: usize, n: usize) -> Graph {
    let id = |r: usize, c: usize| r * n + c;
    let mut edges = Vec::with_capacity(2 * m * n);
    for r in 0..m {
        for c in 0..n {
            edges.push((id(r, c), id(r, (c + 1) % n)));
            edges.push((id(r, c), id((r + 1) % m, c)));
        }
    }
    build(m * n, &edges)
}

/// Cubic Hamiltonian graph from LCF notation `[shifts]^repeats`.
fn lcf(n: usize, shifts: &[isize], repeats: usize) -> Graph {
    debug_assert_eq!(shifts.len() * repeats, n);
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    for i in 0..n {
        let j = (i as isize + shifts[i % shifts.len()]).rem_euclid(n as isize) as usize;
        if i < j {
            edges.push((i, j));
        }
    }
    build(n, &edges)
}

/// 12 vertices, cubic, trivial automorphism group. LCF `[-5,-2,-4,2,5,-2,2,5,-2,-5,4,2]`.
pub fn frucht() -> Graph {
    lcf(12, &[-5, -2, -4, 2, 5, -2, 2, 5, -2, -5, 4, 2], 1)
}

/// 1-skeleton of the truncated tetrahedron. LCF `[2,6,-2]^4`.
pub fn truncated_tetrahedral() -> Graph {
    lcf(12, &[2, 6, -2], 4)
}

/// 24 vertices, cubic, vertex-transitive. LCF `[5,-9,7,-7,9,-5]^4`.
pub fn nauru() -> Graph {
    lcf(24, &[5, -9, 7, -7, 9, -5], 4)
}

/// Positions `(0..3)^3` kept by one Menger step: at most one coordinate is the
/// middle slab.
fn menger_keep() -> impl Iterator<Item = [usize; 3]> {
    (0..27)
        .map(|i| [i / 9, (i / 3) % 3, i % 3])
        .filter(|c| c.iter().filter(|&&x| x == 1).count() <= 1)
}

/// Face-adjacency graph of the 400 subcubes of the level-2 Menger sponge.
pub fn menger2() -> Graph {
    let mut cubes: Vec<[usize; 3]> = menger_keep()
        .flat_map(|outer| {
            menger_keep().map(move |inner| {
                [3 * outer[0] + inner[0], 3 * outer[1] + inner[1], 3 * outer[2] + inner[2]]
            })
        })
        .collect();
    cubes.sort_unstable();
    let index: HashMap<[usize; 3], usize> = cubes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut edges = Vec::new();
    for (i, c) in cubes.iter().enumerate() {
        for axis in 0..3 {
            let mut next = *c;
            next[axis] += 1;
            if let Some(&j) = index.get(&next) {
                edges.push((i, j));
            }
        }
    }
    build(cubes.len(), &edges)
}

/// Loads the Faulkner–Younger graph from an edge list and checks the
/// advertised shape (44 vertices, cubic).
pub fn faulkner_younger(edge_list: &str) -> Result<Graph, GraphError> {
    let g = from_edge_list(edge_list)?;
    if g.n() != 44 || !g.is_regular() || g.degree(0) != 3 {
        return Err(GraphError::InvalidParameters {
            name: GeneratorId::FaulknerYounger.name().into(),
            msg: format!(
                "expected 44 vertices of degree 3, got {} vertices with degrees {}..={}",
                g.n(),
                g.degrees().iter().min().unwrap_or(&0),
                g.degrees().iter().max().unwrap_or(&0)
            ),
        });
    }
    Ok(g)
}
