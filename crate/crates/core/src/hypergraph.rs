//! 3-uniform hypergraphs: the star generators, the random pair-coloring
//! construction that turns a palette into a family of graphs, and brute-force
//! copy detection for small patterns.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::palette::{Color, Palette};
use crate::rational::Rat;
use crate::rng::SplitMix64;

/// An unordered edge, stored with its vertices ascending.
pub type Edge = [usize; 3];

/// A 3-uniform hypergraph on vertices `0..vertices`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ThreeGraph {
    vertices: usize,
    edges: BTreeSet<Edge>,
}

impl ThreeGraph {
    /// Builds a graph from an edge list. Vertices inside an edge may come in
    /// any order; repeated vertices or duplicate edges are rejected.
    pub fn new(vertices: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for e in edges {
            let mut e = e;
            e.sort_unstable();
            if e[0] == e[1] || e[1] == e[2] {
                return Err(Error::InvalidGraph(format!(
                    "edge ({},{},{}) has repeated vertices",
                    e[0], e[1], e[2]
                )));
            }
            if e[2] >= vertices {
                return Err(Error::InvalidGraph(format!(
                    "edge ({},{},{}) uses vertex {} but the graph has {} vertices",
                    e[0], e[1], e[2], e[2], vertices
                )));
            }
            if !set.insert(e) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge ({},{},{})",
                    e[0], e[1], e[2]
                )));
            }
        }
        Ok(ThreeGraph {
            vertices,
            edges: set,
        })
    }

    pub fn empty(vertices: usize) -> Self {
        ThreeGraph {
            vertices,
            edges: BTreeSet::new(),
        }
    }

    /// The complete 3-graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let mut edges = BTreeSet::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    edges.insert([a, b, c]);
                }
            }
        }
        ThreeGraph { vertices: n, edges }
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter()
    }

    pub fn edge_set(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        let mut e = *e;
        e.sort_unstable();
        self.edges.contains(&e)
    }

    /// Number of edges containing `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.contains(&v)).count()
    }

    /// If the graph is a star (one vertex in every edge, all pairs of the
    /// remaining vertices covered), returns `k`. The apex is taken as the
    /// least vertex lying in every edge.
    pub fn as_star(&self) -> Option<usize> {
        if self.vertices < 3 || self.edges.is_empty() {
            return None;
        }
        let k = self.vertices - 1;
        if self.edges.len() != k * (k - 1) / 2 {
            return None;
        }
        let apex = (0..self.vertices).find(|v| self.edges.iter().all(|e| e.contains(v)))?;
        let leaves: Vec<usize> = (0..self.vertices).filter(|&v| v != apex).collect();
        for (i, &a) in leaves.iter().enumerate() {
            for &b in &leaves[i + 1..] {
                let mut e = [apex, a, b];
                e.sort_unstable();
                if !self.edges.contains(&e) {
                    return None;
                }
            }
        }
        Some(k)
    }
}

/// The star `S_k`: apex vertex `0`, leaves `1..=k`, edges `{0,i,j}` for all
/// leaf pairs. `S_3` is the complete 3-graph on 4 vertices minus one edge.
pub fn star(k: usize) -> Result<ThreeGraph> {
    if k < 2 {
        return Err(Error::InvalidGraph(format!("star needs k >= 2, got {k}")));
    }
    let mut edges = BTreeSet::new();
    for i in 1..=k {
        for j in i + 1..=k {
            edges.insert([0, i, j]);
        }
    }
    Ok(ThreeGraph {
        vertices: k + 1,
        edges,
    })
}

// ---------------------------------------------------------------------------
// Random pair-coloring construction
// ---------------------------------------------------------------------------

/// A coloring of all vertex pairs of `0..n`, kept for auditing the
/// construction. Pairs are indexed with `i < j`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairColoring {
    pub n: usize,
    colors: Vec<Color>,
}

impl PairColoring {
    fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.n);
        // position of (i,j) in lexicographic pair order
        i * self.n - i * (i + 1) / 2 + (j - i - 1)
    }

    pub fn get(&self, i: usize, j: usize) -> Color {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.colors[self.index(i, j)]
    }
}

/// Result of the random construction: the graph together with the pair
/// coloring that produced it.
#[derive(Clone, Debug)]
pub struct RodlSample {
    pub graph: ThreeGraph,
    pub coloring: PairColoring,
}

/// Colors every vertex pair of `0..n` independently and uniformly at random
/// (seeded, reproducible) and keeps edge `{i<j<k}` exactly when the ordered
/// triple `(c(ij), c(ik), c(jk))` is admissible. Vertices carry their natural
/// order; if the palette is not admitted by a graph `F`, no ordering of a
/// copy of `F` can survive, so the output is `F`-free for every seed.
pub fn rodl_construct(palette: &Palette, n: usize, seed: u64) -> Result<RodlSample> {
    if palette.colors() == 0 {
        return Err(Error::InvalidPalette(
            "the random construction needs at least one color".into(),
        ));
    }
    if n < 3 {
        return Err(Error::InvalidGraph(format!(
            "the random construction needs n >= 3, got {n}"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let mut colors = Vec::with_capacity(n * (n - 1) / 2);
    for _i in 0..n {
        for _j in _i + 1..n {
            colors.push(rng.next_usize(palette.colors()) as Color);
        }
    }
    let coloring = PairColoring { n, colors };
    let mut edges = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let t = [coloring.get(i, j), coloring.get(i, k), coloring.get(j, k)];
                if palette.contains(&t) {
                    edges.insert([i, j, k]);
                }
            }
        }
    }
    Ok(RodlSample {
        graph: ThreeGraph { vertices: n, edges },
        coloring,
    })
}

// ---------------------------------------------------------------------------
// Copy detection
// ---------------------------------------------------------------------------

/// Largest pattern the exhaustive copy search accepts.
pub const COPY_PATTERN_BUDGET: usize = 10;

/// Searches for an injective map sending every pattern edge to a host edge.
/// Exhaustive over injections with degree pruning; the map returned is the
/// lexicographically least one (images are tried in ascending order for the
/// pattern vertices in index order). Patterns above the budget are refused
/// outright rather than risking an open-ended search inside a verdict.
pub fn contains_copy(host: &ThreeGraph, pattern: &ThreeGraph) -> Result<Option<Vec<usize>>> {
    if pattern.vertices > COPY_PATTERN_BUDGET {
        return Err(Error::Budget {
            what: "copy search pattern vertices",
            requested: pattern.vertices,
            limit: COPY_PATTERN_BUDGET,
        });
    }
    if pattern.vertices > host.vertices {
        return Ok(None);
    }
    let host_degrees: Vec<usize> = (0..host.vertices).map(|v| host.degree(v)).collect();
    let pattern_degrees: Vec<usize> = (0..pattern.vertices).map(|v| pattern.degree(v)).collect();
    // For each pattern vertex v, the edges completed when v is the largest
    // mapped vertex.
    let mut closing_edges: Vec<Vec<Edge>> = vec![Vec::new(); pattern.vertices];
    for &e in &pattern.edges {
        closing_edges[e[2]].push(e);
    }
    let mut image = vec![usize::MAX; pattern.vertices];
    let mut used = vec![false; host.vertices];
    fn extend(
        host: &ThreeGraph,
        host_degrees: &[usize],
        pattern_degrees: &[usize],
        closing_edges: &[Vec<Edge>],
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        v: usize,
    ) -> bool {
        if v == image.len() {
            return true;
        }
        for candidate in 0..host.vertices {
            if used[candidate] || host_degrees[candidate] < pattern_degrees[v] {
                continue;
            }
            image[v] = candidate;
            let ok = closing_edges[v]
                .iter()
                .all(|e| host.contains_edge(&[image[e[0]], image[e[1]], image[e[2]]]));
            if ok {
                used[candidate] = true;
                if extend(
                    host,
                    host_degrees,
                    pattern_degrees,
                    closing_edges,
                    image,
                    used,
                    v + 1,
                ) {
                    return true;
                }
                used[candidate] = false;
            }
        }
        image[v] = usize::MAX;
        false
    }
    let found = extend(
        host,
        &host_degrees,
        &pattern_degrees,
        &closing_edges,
        &mut image,
        &mut used,
        0,
    );
    Ok(if found { Some(image) } else { None })
}

// ---------------------------------------------------------------------------
// Subset density diagnostics
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct SubsetSizeStats {
    pub size: usize,
    pub samples: usize,
    pub min_density: Rat,
    pub mean_density: Rat,
}

#[derive(Clone, Debug, Serialize)]
pub struct SubsetDensityProfile {
    pub vertices: usize,
    pub global_density: Rat,
    pub per_size: Vec<SubsetSizeStats>,
}

/// Samples random vertex subsets at a few sizes and reports the induced edge
/// densities. Purely observational output for reports; no verdict depends on
/// it.
pub fn subset_density_profile(
    graph: &ThreeGraph,
    sample_count: usize,
    seed: u64,
) -> Result<SubsetDensityProfile> {
    let n = graph.vertices;
    if n < 3 {
        return Err(Error::InvalidGraph(format!(
            "density profile needs at least 3 vertices, got {n}"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let mut sizes: Vec<usize> = [n / 4, n / 3, n / 2, 2 * n / 3, n]
        .into_iter()
        .filter(|&s| s >= 3)
        .collect();
    sizes.sort_unstable();
    sizes.dedup();
    let binom3 = |s: usize| s * (s - 1) * (s - 2) / 6;
    let mut per_size = Vec::new();
    for size in sizes {
        let mut min_density: Option<Rat> = None;
        let mut total = Rat::zero();
        for _ in 0..sample_count {
            let chosen = rng.sample_distinct(n, size);
            let inside: Vec<bool> = {
                let mut mark = vec![false; n];
                for &v in &chosen {
                    mark[v] = true;
                }
                mark
            };
            let induced = graph
                .edges
                .iter()
                .filter(|e| e.iter().all(|&v| inside[v]))
                .count();
            let density = Rat::from(induced) / Rat::from(binom3(size));
            min_density = Some(match min_density {
                None => density.clone(),
                Some(m) => m.min(density.clone()),
            });
            total += &density;
        }
        per_size.push(SubsetSizeStats {
            size,
            samples: sample_count,
            min_density: min_density.unwrap_or_else(Rat::zero),
            mean_density: if sample_count == 0 {
                Rat::zero()
            } else {
                total / Rat::from(sample_count)
            },
        });
    }
    Ok(SubsetDensityProfile {
        vertices: n,
        global_density: Rat::from(graph.edge_count()) / Rat::from(binom3(n)),
        per_size,
    })
}
