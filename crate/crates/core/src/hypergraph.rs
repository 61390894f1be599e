//! Circulant hypergraphs and their adjacency and Laplacian tensors.
//!
//! A hypergraph on `[n]` is circulant when its edge set is closed under
//! the rotation `j -> j mod n + 1`. Its adjacency tensor is then circulant,
//! so everything is built on the root (row 1) only.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::tensor::{index, CirculantTensor, DenseTensor};

/// An `m`-uniform hypergraph on vertices `1..=n`.
///
/// Undirected edges are stored sorted. Directed edges (arcs) are stored as
/// the tail followed by the sorted heads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    m: usize,
    directed: bool,
    edges: BTreeSet<Vec<usize>>,
}

/// Input document: a vertex count, uniformity, orientation and the
/// generating edges whose rotation orbits form the edge set.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypergraphDoc {
    pub n: usize,
    pub m: usize,
    #[serde(default)]
    pub directed: bool,
    pub generators: Vec<Vec<usize>>,
}

impl HypergraphDoc {
    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn build(&self) -> Result<Hypergraph> {
        orbit_closure(&self.generators, self.n, self.m, self.directed)
    }
}

fn canonical(edge: &[usize], directed: bool) -> Vec<usize> {
    let mut e = edge.to_vec();
    if directed {
        e[1..].sort_unstable();
    } else {
        e.sort_unstable();
    }
    e
}

/// All rotations of the generators. Every generator must have `m` distinct
/// vertices in `1..=n`.
pub fn orbit_closure(
    generators: &[Vec<usize>],
    n: usize,
    m: usize,
    directed: bool,
) -> Result<Hypergraph> {
    if n < 2 {
        return Err(Error::Shape(format!("need at least 2 vertices, got {n}")));
    }
    if m < 2 || m > n {
        return Err(Error::Shape(format!(
            "uniformity must lie in [2, {n}], got {m}"
        )));
    }
    let mut edges = BTreeSet::new();
    for g in generators {
        if g.len() != m {
            return Err(Error::Shape(format!(
                "edge {g:?} has {} vertices, expected {m}",
                g.len()
            )));
        }
        if let Some(&bad) = g.iter().find(|&&v| v == 0 || v > n) {
            return Err(Error::IndexOutOfRange {
                index: vec![bad],
                dim: n,
            });
        }
        if !g.iter().all_unique() {
            return Err(Error::InvalidArgument(format!(
                "edge {g:?} repeats a vertex"
            )));
        }
        for shift in 0..n {
            let rotated: Vec<usize> = g.iter().map(|&v| (v - 1 + shift) % n + 1).collect();
            edges.insert(canonical(&rotated, directed));
        }
    }
    Ok(Hypergraph {
        n,
        m,
        directed,
        edges,
    })
}

impl Hypergraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn edges(&self) -> impl Iterator<Item = &[usize]> {
        self.edges.iter().map(Vec::as_slice)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges containing vertex `v` (undirected) or arcs with tail `v`.
    fn incident(&self, v: usize) -> impl Iterator<Item = &Vec<usize>> {
        let directed = self.directed;
        self.edges
            .iter()
            .filter(move |e| if directed { e[0] == v } else { e.contains(&v) })
    }

    /// Degree of every vertex (out-degree for directed hypergraphs).
    pub fn degrees(&self) -> Vec<usize> {
        (1..=self.n).map(|v| self.incident(v).count()).collect()
    }

    /// The common degree; rotation closure makes all degrees equal.
    pub fn degree(&self) -> usize {
        self.incident(1).count()
    }

    /// Root of the adjacency tensor: for each edge at vertex 1, weight
    /// `1/(m-1)!` at every ordering of its other vertices.
    fn adjacency_root(&self) -> DenseTensor {
        let (n, m) = (self.n, self.m);
        let weight = 1.0 / (1..m).map(|k| k as f64).product::<f64>();
        let mut root = vec![0.0; n.pow(m as u32 - 1)];
        for e in self.incident(1) {
            let others: Vec<usize> = if self.directed {
                e[1..].to_vec()
            } else {
                e.iter().copied().filter(|&v| v != 1).collect()
            };
            for perm in others.iter().permutations(m - 1) {
                let idx: Vec<usize> = perm.into_iter().map(|&v| v - 1).collect();
                root[index::flat(&idx, n)] += weight;
            }
        }
        DenseTensor::new(m - 1, n, root).expect("shape fixed by construction")
    }
}

pub fn adjacency_tensor(g: &Hypergraph) -> CirculantTensor {
    CirculantTensor::from_root(g.adjacency_root()).expect("finite weights")
}

fn with_degree(g: &Hypergraph, sign: f64) -> CirculantTensor {
    let mut root = g.adjacency_root().scaled(sign).into_entries();
    root[0] += g.degree() as f64;
    CirculantTensor::from_root_entries(g.m, g.n, root).expect("finite weights")
}

/// `D - A` with `D = d I`.
pub fn laplacian(g: &Hypergraph) -> CirculantTensor {
    with_degree(g, -1.0)
}

/// `D + A` with `D = d I`.
pub fn signless_laplacian(g: &Hypergraph) -> CirculantTensor {
    with_degree(g, 1.0)
}
